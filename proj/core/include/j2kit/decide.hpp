// j2kit/decide.hpp
//
// Theoremhood, satisfiability and global consequence for J2, decided over
// the bounded corpus of rooted stratified models.  A refutation always comes
// with an explicit, minimized countermodel; a "theorem" verdict holds
// relative to the corpus bound it records.

#ifndef J2KIT_DECIDE_HPP
#define J2KIT_DECIDE_HPP

#include <cstddef>
#include <optional>

#include "j2kit/bounds.hpp"
#include "j2kit/corpus.hpp"
#include "j2kit/formula.hpp"
#include "j2kit/model.hpp"

namespace j2kit {

struct BoundRecord {
  int max_worlds = 0;
  int max_sheets = 0;
  std::size_t models_checked = 0;
  bool corpus_complete = true;
};

struct Verdict {
  bool theorem = false;
  std::optional<PointedModel> countermodel;
  /// The whole corpus at the recorded bound was searched.
  bool search_exhausted = false;
  BoundRecord bound;

  /// Neither a theorem nor refuted: the corpus was cut short.
  bool inconclusive() const noexcept { return !theorem && !countermodel; }
};

/// f over at least nvars variables (the formula's own variables are always
/// included).
Verdict is_theorem(Formula f, const Bounds& b, std::size_t nvars = 0);

/// Every model globally forcing `premise` globally forces `conclusion`.
/// Reduced to ((P & [0]P & [1]P) -> C).
Verdict consequence(Formula premise, Formula conclusion, const Bounds& b, std::size_t nvars = 0);

struct SatVerdict {
  bool satisfiable = false;
  std::optional<PointedModel> model;
  bool search_exhausted = false;
  BoundRecord bound;

  bool inconclusive() const noexcept { return !satisfiable && !search_exhausted; }
};

SatVerdict is_satisfiable(Formula f, const Bounds& b, std::size_t nvars = 0);

/// Greedily deletes worlds from the generated submodel at `point` while f
/// stays false at the root, then relabels canonically.
PointedModel minimize_countermodel(const PointedModel& w, Formula f);

/// Index of the first corpus model on which f is not globally true.
std::optional<std::size_t> first_refuting_model(const Corpus& c, Formula f);

}  // namespace j2kit

#endif  // J2KIT_DECIDE_HPP
