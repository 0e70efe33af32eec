#include <algorithm>
#include <unordered_set>

#include "j2kit/corpus.hpp"
#include "j2kit/decide.hpp"
#include "j2kit/unify.hpp"

namespace j2kit {

namespace {

// Set of universe indices, one bit each.
using TypeSet = std::vector<std::uint64_t>;

bool contains(const TypeSet& s, std::size_t i) { return (s[i / 64] >> (i % 64)) & 1U; }
void insert(TypeSet& s, std::size_t i) { s[i / 64] |= std::uint64_t{1} << (i % 64); }
void erase(TypeSet& s, std::size_t i) { s[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

bool subset(const TypeSet& a, const TypeSet& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] & ~b[k]) return false;
  }
  return true;
}

bool empty(const TypeSet& s) {
  return std::all_of(s.begin(), s.end(), [](std::uint64_t w) { return w == 0; });
}

std::string key_of(const TypeSet& s) {
  return std::string(reinterpret_cast<const char*>(s.data()), s.size() * sizeof(std::uint64_t));
}

// Point-type sets of every model we know: the corpus plus each type's own
// representative.  core(T) keeps the types occurring in some model all of
// whose points lie in T, which is the largest set below T closed under
// generated submodels and realizable by a model.
class TypeSpace {
 public:
  TypeSpace(const TypeUniverse& u, const Corpus& c) : u_(u), words_((u.types.size() + 63) / 64) {
    auto add = [&](const StratifiedModel& m) {
      TypeSet s(words_, 0);
      for (const std::string& code : world_codes(m, u_.n)) {
        const int i = u_.index_of(code);
        if (i < 0) return;
        insert(s, static_cast<std::size_t>(i));
      }
      if (seen_.insert(key_of(s)).second) models_.push_back(std::move(s));
    };
    for (const StratifiedModel& m : c.models) add(m);
    for (const NType& t : u.types) add(t.rep.model);
  }

  TypeSet none() const { return TypeSet(words_, 0); }

  TypeSet core(const TypeSet& t) const {
    TypeSet out = none();
    for (const TypeSet& m : models_) {
      if (!subset(m, t)) continue;
      for (std::size_t k = 0; k < words_; ++k) out[k] |= m[k];
    }
    return out;
  }

  TypeSet points_of(const StratifiedModel& m, bool skip_root) const {
    TypeSet s = none();
    const std::vector<std::string> codes = world_codes(m, u_.n);
    for (int w = 0; w < m.size(); ++w) {
      if (skip_root && w == m.root()) continue;
      const int i = u_.index_of(codes[w]);
      if (i >= 0) insert(s, static_cast<std::size_t>(i));
    }
    return s;
  }

  std::vector<NType> types_in(const TypeSet& s) const {
    std::vector<NType> out;
    for (std::size_t i = 0; i < u_.types.size(); ++i) {
      if (contains(s, i)) out.push_back(u_.types[i]);
    }
    return out;
  }

 private:
  const TypeUniverse& u_;
  std::size_t words_;
  std::vector<TypeSet> models_;
  std::unordered_set<std::string> seen_;
};

}  // namespace

ApproxResult projective_approximation(Formula phi, const Bounds& b, std::size_t nvars) {
  nvars = std::max(nvars, phi.variable_bound());
  ApproxResult r;
  r.bounds = b;
  r.n = static_cast<int>(phi.depth());

  if (phi.is_variable_free()) {
    r.candidates_examined = 1;
    Verdict v = is_theorem(phi, b, nvars);
    r.exhaustive = !v.inconclusive();
    if (v.theorem) {
      r.pi.push_back(phi);
      r.members.push_back(ApproxMember{phi, Substitution::identity(nvars), {}});
      r.s_size = 1;
    }
    return r;
  }

  const TypeUniverse u = enumerate_types(nvars, r.n, b);
  r.universe_truncated = u.truncated;
  auto corpus = j2_corpus(nvars, b);
  const TypeSpace space(u, *corpus);

  TypeSet start = space.none();
  for (std::size_t i = 0; i < u.types.size(); ++i) {
    const NType& t = u.types[i];
    if (force(t.rep.model, t.rep.point, phi)) insert(start, i);
  }
  start = space.core(start);

  struct Survivor {
    TypeSet set;
    Formula psi;
    Substitution unifier;
  };
  std::vector<Survivor> found;
  std::unordered_set<std::string> visited;
  std::vector<TypeSet> stack{start};
  while (!stack.empty()) {
    TypeSet t = std::move(stack.back());
    stack.pop_back();
    if (empty(t) || !visited.insert(key_of(t)).second) continue;
    if (r.candidates_examined == b.max_candidates) {
      r.exhaustive = false;
      break;
    }
    ++r.candidates_examined;
    // On the full set psi_T and phi have the same global models.
    const Formula psi = t == start ? phi : class_to_formula(space.types_in(t), r.n, nvars);
    ProjectivityReport rep = projective_unifier(psi, b, nvars);
    if (rep.projective) {
      found.push_back(Survivor{t, psi, *rep.unifier});
      continue;
    }
    if (!rep.witness) {
      r.exhaustive = false;
      continue;
    }
    // A projective subclass has to drop one of the witness's non-root types.
    const TypeSet below = space.points_of(rep.witness->model, true);
    for (std::size_t i = 0; i < u.types.size(); ++i) {
      if (!contains(below, i)) continue;
      TypeSet smaller = t;
      erase(smaller, i);
      stack.push_back(space.core(smaller));
    }
  }
  r.s_size = found.size();

  for (std::size_t i = 0; i < found.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < found.size() && !dominated; ++j) {
      dominated = j != i && subset(found[i].set, found[j].set) && found[i].set != found[j].set;
    }
    if (dominated) continue;
    std::vector<std::string> codes;
    for (const NType& t : space.types_in(found[i].set)) codes.push_back(t.code);
    r.pi.push_back(found[i].psi);
    r.members.push_back(ApproxMember{found[i].psi, found[i].unifier, std::move(codes)});
  }
  return r;
}

std::optional<bool> is_unifiable(Formula phi, const Bounds& b, std::size_t nvars) {
  if (phi.is_variable_free()) {
    Verdict v = is_theorem(phi, b, nvars);
    if (v.inconclusive()) return std::nullopt;
    return v.theorem;
  }
  ApproxResult r = projective_approximation(phi, b, nvars);
  if (!r.pi.empty()) return true;
  if (r.exhaustive && !r.universe_truncated) return false;
  return std::nullopt;
}

std::vector<Substitution> basis_of_unifiers(Formula phi, const Bounds& b, std::size_t nvars) {
  ApproxResult r = projective_approximation(phi, b, nvars);
  std::vector<Substitution> out;
  for (ApproxMember& m : r.members) out.push_back(std::move(m.unifier));
  return out;
}

RuleVerdict is_admissible(Formula phi1, Formula phi2, const Bounds& b, std::size_t nvars) {
  nvars = std::max({nvars, phi1.variable_bound(), phi2.variable_bound()});
  RuleVerdict v;
  v.derivable = is_theorem(Formula::implies(phi1, phi2), b, nvars).theorem;
  v.approx = projective_approximation(phi1, b, nvars);
  v.admissible = true;
  bool undecided = false;
  for (Formula psi : v.approx.pi) {
    Verdict c = consequence(psi, phi2, b, nvars);
    if (c.countermodel) {
      v.admissible = false;
      v.failing_psi = psi;
      v.failing_countermodel = c.countermodel;
      // A verified unifier of psi that does not unify phi2 settles it.
      v.exhaustive = true;
      return v;
    }
    undecided |= !c.theorem;
  }
  v.exhaustive = !undecided && v.approx.exhaustive && !v.approx.universe_truncated;
  return v;
}

}  // namespace j2kit
