#include "j2kit/unify.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <unordered_set>

#include "j2kit/corpus.hpp"
#include "j2kit/decide.hpp"
#include "j2kit/evaluator.hpp"
#include "parallel.hpp"

namespace j2kit {

Substitution guarded_substitution(Formula phi, const Substitution& sigma) {
  std::vector<Formula> images;
  images.reserve(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    images.push_back(Formula::disj(Formula::conj(phi, Formula::var(i)),
                                   Formula::conj(Formula::neg(phi), sigma[i])));
  }
  return Substitution(std::move(images));
}

namespace {

bool hypothesis_holds(Formula phi, const StratifiedModel& w) {
  const WorldSet above = w.r0(w.root());
  return (truth_set(w, phi) & above) == above;
}

// `sheet` (a single-sheet model) takes the place of w's root sheet.
StratifiedModel replace_root_sheet(const StratifiedModel& w, const StratifiedModel& sheet) {
  StratifiedModel::Parts p = sheet.parts();
  for (int& s : p.sheet_of) s = 0;
  p.ids.clear();
  const int rs = w.root_sheet();
  const int nsheets = static_cast<int>(w.sheets().size());
  std::vector<int> local(w.size(), -1);
  for (int x = 0; x < w.size(); ++x) {
    if (w.sheet_of(x) == rs) continue;
    local[x] = static_cast<int>(p.val.size());
    p.val.push_back(w.val(x));
    p.sheet_of.push_back(w.sheet_of(x) + 1);
    p.r1.push_back(0);
  }
  for (int x = 0; x < w.size(); ++x) {
    if (local[x] < 0) continue;
    for (int y = 0; y < w.size(); ++y) {
      if (w.r1(x, y)) p.r1[local[x]] |= bit(local[y]);
    }
  }
  p.sheet_above.assign(nsheets + 1, 0);
  for (int s = 0; s < nsheets; ++s) {
    if (s == rs) continue;
    p.sheet_above[0] |= std::uint64_t{1} << (s + 1);
    p.sheet_above[s + 1] = (w.sheet_above(s) << 1) & ~(std::uint64_t{1} << (rs + 1));
  }
  p.root = sheet.root();
  return StratifiedModel::from_parts(std::move(p));
}

struct FactorAction {
  CompiledFormulas guard;
  CompiledFormulas images;
};

struct ActScratch {
  std::vector<WorldSet> a, out;
};

// Points refuting phi take the valuation prescribed by sigma.
StratifiedModel act(const FactorAction& f, const StratifiedModel& m, ActScratch& s) {
  const WorldSet keep = f.guard.evaluate_first(m, s.a);
  if (keep == m.all()) return m;
  f.images.evaluate(m, s.a, s.out);
  std::vector<Valuation> val = m.valuation();
  for (int w = 0; w < m.size(); ++w) {
    if (has(keep, w)) continue;
    Valuation v = 0;
    for (std::size_t i = 0; i < s.out.size(); ++i) {
      if (has(s.out[i], w)) v |= Valuation{1} << i;
    }
    val[w] = v;
  }
  return m.with_valuation(std::move(val));
}

}  // namespace

ThetaFactor theta_W(Formula phi, const StratifiedModel& w, const Bounds& b, std::size_t nvars) {
  nvars = std::max(nvars, phi.variable_bound());
  if (!hypothesis_holds(phi, w)) {
    throw HypothesisViolated("phi fails at an R0-successor of the root");
  }
  SheetFormula sheet = eliminate_box0(phi, w, w.root_sheet());
  GlUnifierResult gl = gl_projective_unifier(sheet.body, b, nvars);
  if (!gl.unifier) throw GLNotProjective("sheet formula has no GL projective unifier", gl.violation);
  Substitution theta = guarded_substitution(phi, *gl.unifier);
  return ThetaFactor{std::move(sheet), std::move(*gl.unifier), std::move(theta)};
}

ThetaBar theta_bar(Formula phi, const TypeUniverse& u, const Bounds& b) {
  if (u.n != static_cast<int>(phi.depth()) + 1) {
    throw std::invalid_argument("theta_bar needs a universe of depth d(phi) + 1");
  }
  const std::size_t nvars = std::max(u.nvars, phi.variable_bound());
  ThetaBar tb;
  tb.subst = Substitution::identity(nvars);
  std::unordered_set<Formula, FormulaHash> seen;
  for (const NType& t : u.types) {
    const StratifiedModel& rep = t.rep.model;
    if (!hypothesis_holds(phi, rep)) continue;
    ++tb.classes;
    SheetFormula sheet = eliminate_box0(phi, rep, rep.root_sheet());
    if (!seen.insert(sheet.body).second) continue;
    GlUnifierResult gl = gl_projective_unifier(sheet.body, b, nvars);
    if (!gl.unifier) {
      tb.gl_failures.emplace_back(t.rep, gl.violation);
      continue;
    }
    Substitution theta = guarded_substitution(phi, *gl.unifier);
    tb.subst = compose(tb.subst, theta);
    tb.factors.push_back(ThetaFactor{std::move(sheet), std::move(*gl.unifier), std::move(theta)});
  }
  return tb;
}

PointPredicate formula_points(Formula phi) {
  auto compiled = std::make_shared<CompiledFormulas>(phi);
  return [compiled](const StratifiedModel& m) {
    std::vector<WorldSet> scratch;
    return compiled->evaluate_first(m, scratch);
  };
}

PointPredicate type_points(std::vector<std::string> codes, int n) {
  auto set = std::make_shared<std::unordered_set<std::string>>(codes.begin(), codes.end());
  return [set, n](const StratifiedModel& m) {
    std::vector<std::string> c = world_codes(m, n);
    WorldSet ok = 0;
    for (int w = 0; w < m.size(); ++w) {
      if (set->contains(c[w])) ok |= bit(w);
    }
    return ok;
  };
}

bool is_extension_violation(const PointPredicate& ok, const StratifiedModel& m, std::size_t nvars) {
  const WorldSet rest = m.all() & ~bit(m.root());
  if ((ok(m) & rest) != rest) return false;
  const Valuation nval = Valuation{1} << nvars;
  for (Valuation v = 0; v < nval; ++v) {
    if (has(ok(variant(m, v)), m.root())) return false;
  }
  return true;
}

std::optional<ExtensionWitness> find_extension_violation(const PointPredicate& ok, std::size_t nvars,
                                                         const Bounds& b,
                                                         std::span<const StratifiedModel> extra) {
  auto corpus = j2_corpus(nvars, b);
  const auto& models = corpus->models;
  auto hit = detail::find_first<int>(models.size(), [&](std::size_t i, int&) {
    return is_extension_violation(ok, models[i], nvars);
  });
  if (hit) return ExtensionWitness{models[*hit], "corpus", 0};
  for (const StratifiedModel& m : extra) {
    if (is_extension_violation(ok, m, nvars)) return ExtensionWitness{m, "sheet-replacement", 0};
  }
  // Class members small enough to serve as summands, grouped by residue.
  std::map<std::string, std::vector<const StratifiedModel*>> groups;
  for (const StratifiedModel& m : models) {
    if (m.size() > b.oracle_summand_worlds) break;
    if (ok(m) == m.all()) groups[residue_code(m)].push_back(&m);
  }
  for (const auto& [code, members] : groups) {
    const int k = static_cast<int>(members.size());
    std::vector<int> pick;
    std::optional<ExtensionWitness> found;
    auto rec = [&](auto&& self, int start) -> void {
      if (found) return;
      if (!pick.empty()) {
        std::vector<StratifiedModel> family;
        for (int i : pick) family.push_back(*members[i]);
        StratifiedModel sum = one_sum(family);
        if (is_extension_violation(ok, sum, nvars)) {
          found = ExtensionWitness{sum, "1-sum", pick.size()};
          return;
        }
      }
      if (static_cast<int>(pick.size()) == b.oracle_summands) return;
      for (int i = start; i < k && !found; ++i) {
        pick.push_back(i);
        self(self, i + 1);
        pick.pop_back();
      }
    };
    rec(rec, 0);
    if (found) return found;
  }
  return std::nullopt;
}

ProjectivityReport projective_unifier(Formula phi, const Bounds& b, std::size_t nvars) {
  nvars = std::max(nvars, phi.variable_bound());
  ProjectivityReport report;
  report.bounds = b;
  auto corpus = j2_corpus(nvars, b);

  auto verified = [&](const Substitution& theta) {
    if (!is_theorem(apply_subst(theta, phi), b, nvars).theorem) return false;
    for (std::size_t i = 0; i < nvars; ++i) {
      Formula p = Formula::var(i);
      if (!consequence(phi, Formula::iff(theta[i], p), b, nvars).theorem) return false;
    }
    return true;
  };

  const Substitution id = Substitution::identity(nvars);
  if (!first_refuting_model(*corpus, phi) && verified(id)) {
    report.projective = true;
    report.unifier = id;
    return report;
  }

  std::vector<StratifiedModel> extra;
  if (!phi.is_variable_free()) {
    TypeUniverse u = enumerate_types(nvars, static_cast<int>(phi.depth()) + 1, b);
    ThetaBar tb = theta_bar(phi, u, b);
    report.factors = tb.factors.size();
    for (const auto& [rep, violation] : tb.gl_failures) {
      if (violation) extra.push_back(replace_root_sheet(rep.model, *violation));
    }
    std::vector<FactorAction> actions;
    for (const ThetaFactor& f : tb.factors) {
      actions.push_back(FactorAction{CompiledFormulas(phi), CompiledFormulas(f.sigma.images())});
    }
    const int max_rounds =
        u.truncated ? b.max_rounds : static_cast<int>(std::min<std::size_t>(u.types.size(), 1 << 20));
    CompiledFormulas target(phi);
    std::vector<StratifiedModel> cur = corpus->models;
    Substitution theta = id;
    for (int round = 1; round <= max_rounds && !actions.empty(); ++round) {
      theta = compose(theta, tb.subst);
      std::atomic<bool> changed{false};
      std::atomic<bool> all_good{true};
      detail::for_all<ActScratch>(cur.size(), [&](std::size_t i, ActScratch& s) {
        StratifiedModel m = cur[i];
        for (const FactorAction& a : actions) m = act(a, m, s);
        if (!(m.valuation() == cur[i].valuation())) changed = true;
        if (target.evaluate_first(m, s.a) != m.all()) all_good = false;
        cur[i] = std::move(m);
      });
      if (all_good) {
        report.rounds_used = round;
        if (verified(theta)) {
          report.projective = true;
          report.unifier = theta;
          return report;
        }
        break;
      }
      if (!changed) break;
    }
  }
  report.witness = find_extension_violation(formula_points(phi), nvars, b, extra);
  return report;
}

RankInfo rank_info(Formula phi, const StratifiedModel& m, int n) {
  RankInfo r;
  r.n = n;
  const WorldSet truth = truth_set(m, phi);
  const std::vector<std::string> codes = world_codes(m, n);
  std::vector<bool> good(m.size());
  for (int y = 0; y < m.size(); ++y) good[y] = (m.cone(y) & ~truth) == 0;
  r.per_world.resize(m.size());
  for (int x = 0; x < m.size(); ++x) {
    std::unordered_set<std::string> classes;
    for (int y = 0; y < m.size(); ++y) {
      if (m.r0(x, y) && good[y]) classes.insert(codes[y]);
    }
    r.per_world[x] = static_cast<int>(classes.size());
    if (!good[x] && (!r.mu || r.per_world[x] < *r.mu)) r.mu = r.per_world[x];
  }
  return r;
}

RankInfo rank_info(Formula phi, const StratifiedModel& m, const TypeUniverse& u) {
  return rank_info(phi, m, u.n);
}

std::vector<std::size_t> kn_closure(std::span<const std::size_t> ts, const TypeUniverse& u) {
  std::unordered_set<std::string> points;
  for (std::size_t i : ts) {
    for (std::string& c : world_codes(u.types.at(i).rep.model, u.n)) points.insert(std::move(c));
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < u.types.size(); ++i) {
    bool inside = true;
    for (const std::string& c : world_codes(u.types[i].rep.model, u.n)) {
      if (!points.contains(c)) {
        inside = false;
        break;
      }
    }
    if (inside) out.push_back(i);
  }
  return out;
}

}  // namespace j2kit
