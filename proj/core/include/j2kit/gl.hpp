// j2kit/gl.hpp
//
// The unimodal GL engine behind sheet-level reasoning.  A 1-sheet of a
// stratified model is a GL model under R1; once every maximal [0]-subformula
// is replaced by its (sheet-constant) truth value, only [1] remains.

#ifndef J2KIT_GL_HPP
#define J2KIT_GL_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "j2kit/bounds.hpp"
#include "j2kit/decide.hpp"
#include "j2kit/formula.hpp"
#include "j2kit/model.hpp"

namespace j2kit {

class ConstancyViolated : public ModelError {
 public:
  using ModelError::ModelError;
};

struct SheetFormula {
  Formula body;    // no [0] inside
  Formula source;  // the bimodal formula it came from
  /// Truth value chosen for each maximal [0]-subformula of source.
  std::vector<std::pair<Formula, bool>> assignment;
};

/// Maximal subformulas of the form [0]A, in structural order.
std::vector<Formula> maximal_box0_subformulas(Formula f);

/// Replaces the given [0]-subformulas by T/F.
SheetFormula assign_box0(Formula f, std::vector<std::pair<Formula, bool>> assignment);

/// Reads the assignment off sheet `sheet` of m.  Throws ConstancyViolated if
/// some [0]-subformula is not constant on the sheet.
SheetFormula eliminate_box0(Formula f, const StratifiedModel& m, int sheet);

/// GL theoremhood over rooted trees of at most b.gl_max_worlds worlds.
/// Throws std::invalid_argument if body mentions [0].
Verdict gl_is_theorem(Formula body, const Bounds& b, std::size_t nvars = 0);

struct GlExtensionResult {
  bool holds = true;
  /// A tree whose non-root points satisfy f but none of whose root variants
  /// does.
  std::optional<StratifiedModel> violation;
  bool search_complete = true;
};

GlExtensionResult gl_extension_property(Formula body, const Bounds& b, std::size_t nvars = 0);

struct GlUnifierResult {
  /// Present only after both unifier conditions were verified.
  std::optional<Substitution> unifier;
  /// Absent unifier with a concrete extension-property violation.
  std::optional<StratifiedModel> violation;
  int rounds = 0;
  /// Neither a unifier nor a violation was found.
  bool exhausted() const noexcept { return !unifier && !violation; }
};

/// Iterates the per-valuation substitutions
///   s_v(p) = (g & p) | (~g & v(p)),  g = f, then g = f & [1]f,
/// in valuation order and returns the first verified iterate.
GlUnifierResult gl_projective_unifier(Formula body, const Bounds& b, std::size_t nvars = 0);

}  // namespace j2kit

#endif  // J2KIT_GL_HPP
