// j2kit/bisim.hpp
//
// n-bisimulation, characteristic formulas and n-types.
//
// An n-type is identified by a canonical byte code computed bottom-up:
// code_0(x) is the valuation of x, and code_{k+1}(x) adds the sorted sets of
// code_k over the R0- and R1-successors of x.  Two pointed models have equal
// n-codes iff they are n-bisimilar.  The full code (depth unbounded) decides
// bisimilarity of finite models since both relations are acyclic.

#ifndef J2KIT_BISIM_HPP
#define J2KIT_BISIM_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "j2kit/bounds.hpp"
#include "j2kit/formula.hpp"
#include "j2kit/model.hpp"

namespace j2kit {

/// Depth argument meaning "no depth limit".
inline constexpr int kFullDepth = -1;

/// Code of every world of m at depth n (kFullDepth for the full code).
/// Throws BoundExhausted when a code exceeds an internal size cap.
std::vector<std::string> world_codes(const StratifiedModel& m, int n);

std::string point_code(const PointedModel& w, int n);

std::string to_hex(const std::string& bytes);

/// Decides W_a ~n W_b by the back-and-forth recursion, memoized on
/// (world, world, depth).  kFullDepth compares up to the combined size.
bool nbisimilar(const PointedModel& a, const PointedModel& b, int n);

/// X^n of the pointed model over the first nvars variables.
Formula char_formula(const PointedModel& w, int n, std::size_t nvars);

/// X^n rebuilt from an n-code (depends only on the type).
Formula char_formula_of_code(const std::string& code, int n, std::size_t nvars);

struct NType {
  int n = 0;
  PointedModel rep;  // small canonical representative, rooted at its point
  std::string code;
};

/// Representative obtained by greedy world deletion preserving the n-code,
/// then canonical relabeling.
NType type_of(const PointedModel& w, int n);

struct TypeUniverse {
  int n = 0;
  std::size_t nvars = 0;
  std::vector<NType> types;  // sorted by code
  /// New types still appeared among the largest generated models, or the
  /// corpus itself was cut short.
  bool truncated = false;
  int bound_worlds = 0;

  /// Index of the type with this code, or -1.
  int index_of(const std::string& code) const;
};

/// All n-types.  For n <= 1 over at most two variables the list is built
/// directly and is complete; otherwise it holds the types realized in the J2
/// corpus of the given bounds.  Throws BoundExhausted if no type is produced.
TypeUniverse enumerate_types(std::size_t nvars, int n, const Bounds& b);

/// Disjunction of the characteristic formulas of the given types (bottom for
/// an empty set), in code order.
Formula class_to_formula(std::span<const NType> types, int n, std::size_t nvars);

}  // namespace j2kit

#endif  // J2KIT_BISIM_HPP
