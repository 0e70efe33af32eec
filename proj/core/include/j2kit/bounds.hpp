// j2kit/bounds.hpp
//
// Search limits shared by every bounded procedure.  Verdicts that depend on a
// bound carry a copy of the bound that produced them.

#ifndef J2KIT_BOUNDS_HPP
#define J2KIT_BOUNDS_HPP

#include <cstddef>
#include <stdexcept>

namespace j2kit {

struct Bounds {
  /// Largest model in the J2 model corpus.
  int max_worlds = 5;
  /// Largest number of 1-sheets in a corpus model.
  int max_sheets = 5;
  /// Rounds of the unifier iteration before giving up.
  int max_rounds = 16;
  /// Cap on generated candidates (corpus models, approximation nodes).
  std::size_t max_candidates = 2'000'000;
  /// Largest tree in the GL corpus.
  int gl_max_worlds = 6;
  /// 1-sum witness search: at most this many summands ...
  int oracle_summands = 3;
  /// ... each with at most this many worlds.
  int oracle_summand_worlds = 3;
  /// Approximate byte budget for enumerations; 0 means unlimited.
  std::size_t max_memory = 0;
};

/// A bound cut a search before it could reach a verdict.
class BoundExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace j2kit

#endif  // J2KIT_BOUNDS_HPP
