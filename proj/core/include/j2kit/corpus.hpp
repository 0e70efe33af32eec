// j2kit/corpus.hpp
//
// Finite model corpora used by every bounded search.
//
// The J2 corpus holds one model per bisimulation class among "trees of
// trees": a root 1-sheet that is a GL tree, with a set of smaller corpus
// models placed R0-above it.  Every finite rooted stratified model is
// bisimilar to such a model, so bounding the world count bounds the search
// without losing shapes other than by size.  The GL corpus is the analogous
// set of rooted trees with a single sheet.
//
// Corpora are built on first use and cached per (variables, bounds); the
// cache is thread-safe and the returned objects are immutable.

#ifndef J2KIT_CORPUS_HPP
#define J2KIT_CORPUS_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "j2kit/bounds.hpp"
#include "j2kit/model.hpp"

namespace j2kit {

struct Corpus {
  std::size_t nvars = 0;
  int max_worlds = 0;
  int max_sheets = 0;
  /// Ordered by size, then by generation order (deterministic).
  std::vector<StratifiedModel> models;
  /// Full bisimulation code of each model's root.
  std::vector<std::string> codes;
  /// models.size() restricted to each world count, index = worlds.
  std::vector<std::size_t> count_by_size;
  /// Generation stopped at max_candidates before completing.
  bool truncated = false;
  /// Estimated footprint, checked against the memory budget on every lookup.
  std::size_t bytes = 0;
};

/// Rooted stratified models with at most b.max_worlds worlds and b.max_sheets
/// sheets over nvars variables.  Throws BoundExhausted if the memory budget
/// is exceeded.
std::shared_ptr<const Corpus> j2_corpus(std::size_t nvars, const Bounds& b);

/// Rooted GL trees (one sheet, R0 empty) with at most max_worlds worlds.
std::shared_ptr<const Corpus> gl_corpus(std::size_t nvars, int max_worlds, const Bounds& b);

/// Rough per-model footprint used for the memory budget.
std::size_t approx_model_bytes(int worlds);

}  // namespace j2kit

#endif  // J2KIT_CORPUS_HPP
