// j2kit/unify.hpp
//
// Projective unifiers, projective approximation, unifier bases and
// admissibility for J2.
//
// A projective unifier is assembled from per-class factors
//   theta_W(p) = (phi & p) | (~phi & sigma(p)),
// where sigma is a GL projective unifier of the sheet formula phi' read off
// the root sheet of a class representative W.  The product of the distinct
// factors is iterated until phi becomes a theorem.  Negative answers are
// only given with a concrete extension-property violation; everything else
// that runs out of bounds is reported as inconclusive.

#ifndef J2KIT_UNIFY_HPP
#define J2KIT_UNIFY_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "j2kit/bisim.hpp"
#include "j2kit/bounds.hpp"
#include "j2kit/formula.hpp"
#include "j2kit/gl.hpp"
#include "j2kit/model.hpp"

namespace j2kit {

class HypothesisViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GLNotProjective : public std::runtime_error {
 public:
  GLNotProjective(const std::string& what, std::optional<StratifiedModel> violation)
      : std::runtime_error(what), violation(std::move(violation)) {}
  std::optional<StratifiedModel> violation;
};

/// (phi & p) | (~phi & sigma(p)) for every variable.
Substitution guarded_substitution(Formula phi, const Substitution& sigma);

struct ThetaFactor {
  SheetFormula sheet;
  Substitution sigma;  // GL projective unifier of sheet.body
  Substitution theta;  // guarded_substitution(phi, sigma)
};

/// Requires phi at every R0-successor of w's root (HypothesisViolated);
/// throws GLNotProjective when the root sheet's formula has no GL
/// projective unifier.
ThetaFactor theta_W(Formula phi, const StratifiedModel& w, const Bounds& b, std::size_t nvars = 0);

struct ThetaBar {
  Substitution subst;
  /// One factor per distinct sheet formula, in universe order.
  std::vector<ThetaFactor> factors;
  /// Classes whose representative satisfies the hypothesis.
  std::size_t classes = 0;
  /// Representatives whose sheet formula is not GL projective, with the GL
  /// violation when one was found.
  std::vector<std::pair<PointedModel, std::optional<StratifiedModel>>> gl_failures;
};

/// Universe depth must be d(phi) + 1.
ThetaBar theta_bar(Formula phi, const TypeUniverse& u, const Bounds& b);

/// Worlds of m whose generated submodel is in some pointwise-defined class.
using PointPredicate = std::function<WorldSet(const StratifiedModel&)>;

/// Points forcing phi.
PointPredicate formula_points(Formula phi);
/// Points whose n-code is one of `codes`.
PointPredicate type_points(std::vector<std::string> codes, int n);

struct ExtensionWitness {
  /// Non-root points are in the class; no variant's root is.
  StratifiedModel model;
  std::string source;  // "corpus", "sheet-replacement" or "1-sum"
  std::size_t summands = 0;
};

/// Searches corpus models, then `extra` candidates, then 1-sums of small
/// pairwise 1-congruent class members.
std::optional<ExtensionWitness> find_extension_violation(const PointPredicate& ok, std::size_t nvars,
                                                         const Bounds& b,
                                                         std::span<const StratifiedModel> extra = {});

/// True iff model m's non-root points pass `ok` and no root valuation does.
bool is_extension_violation(const PointPredicate& ok, const StratifiedModel& m, std::size_t nvars);

struct ProjectivityReport {
  bool projective = false;
  std::optional<Substitution> unifier;
  int rounds_used = 0;
  std::optional<ExtensionWitness> witness;
  std::size_t factors = 0;
  Bounds bounds;

  bool inconclusive() const noexcept { return !projective && !witness; }
};

ProjectivityReport projective_unifier(Formula phi, const Bounds& b, std::size_t nvars = 0);

struct RankInfo {
  std::vector<int> per_world;
  std::optional<int> mu;  // absent when phi is globally true
  int n = 0;              // depth of the types counted
};

/// rk(x) counts the n-types of phi-models generated at R0-successors of x.
RankInfo rank_info(Formula phi, const StratifiedModel& m, int n);
RankInfo rank_info(Formula phi, const StratifiedModel& m, const TypeUniverse& u);

/// Universe types all of whose points are n-bisimilar to a point of some
/// member of ts (indices into u.types, ascending).
std::vector<std::size_t> kn_closure(std::span<const std::size_t> ts, const TypeUniverse& u);

// ---------------------------------------------------------------------------
// Projective approximation, bases, admissibility
// ---------------------------------------------------------------------------

struct ApproxMember {
  Formula psi;
  Substitution unifier;
  std::vector<std::string> type_codes;  // the n-types where psi holds
};

struct ApproxResult {
  std::vector<Formula> pi;
  std::vector<ApproxMember> members;
  /// Projective candidates found before maximality filtering.
  std::size_t s_size = 0;
  std::size_t candidates_examined = 0;
  int n = 0;
  Bounds bounds;
  bool exhaustive = true;
  bool universe_truncated = false;
};

ApproxResult projective_approximation(Formula phi, const Bounds& b, std::size_t nvars = 0);

/// Absent when the approximation was not exhaustive and found nothing.
std::optional<bool> is_unifiable(Formula phi, const Bounds& b, std::size_t nvars = 0);

std::vector<Substitution> basis_of_unifiers(Formula phi, const Bounds& b, std::size_t nvars = 0);

struct RuleVerdict {
  bool admissible = false;
  /// phi1 -> phi2 is a theorem.
  bool derivable = false;
  std::optional<Formula> failing_psi;
  std::optional<PointedModel> failing_countermodel;
  bool exhaustive = false;
  ApproxResult approx;

  bool inconclusive() const noexcept { return admissible && !exhaustive; }
};

RuleVerdict is_admissible(Formula phi1, Formula phi2, const Bounds& b, std::size_t nvars = 0);

}  // namespace j2kit

#endif  // J2KIT_UNIFY_HPP
