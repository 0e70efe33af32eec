#include "j2kit/gl.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "j2kit/corpus.hpp"
#include "j2kit/evaluator.hpp"

namespace j2kit {

std::vector<Formula> maximal_box0_subformulas(Formula f) {
  std::vector<Formula> out;
  std::unordered_set<Formula, FormulaHash> seen;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (!seen.insert(g).second) continue;
    if (g.kind() == Kind::Box && g.modality() == 0) {
      out.push_back(g);
      continue;
    }
    if (g.is_binary()) stack.push_back(g.rhs());
    if (g.is_binary() || g.is_unary()) stack.push_back(g.lhs());
  }
  std::sort(out.begin(), out.end(), [](Formula a, Formula b) { return structural_compare(a, b) < 0; });
  return out;
}

SheetFormula assign_box0(Formula f, std::vector<std::pair<Formula, bool>> assignment) {
  std::unordered_map<Formula, Formula, FormulaHash> table;
  for (const auto& [g, value] : assignment) table.emplace(g, value ? Formula::top() : Formula::bot());
  return SheetFormula{replace_subformulas(f, table), f, std::move(assignment)};
}

SheetFormula eliminate_box0(Formula f, const StratifiedModel& m, int sheet) {
  const WorldSet mask = m.sheets().at(sheet).mask;
  std::vector<std::pair<Formula, bool>> assignment;
  for (Formula g : maximal_box0_subformulas(f)) {
    const WorldSet t = truth_set(m, g) & mask;
    if (t != 0 && t != mask) {
      throw ConstancyViolated("a [0]-subformula changes truth value inside a 1-sheet");
    }
    assignment.emplace_back(g, t == mask);
  }
  return assign_box0(f, std::move(assignment));
}

namespace {

void require_sheet_formula(Formula body) {
  if (!body.free_of_modality(0)) throw std::invalid_argument("GL formula mentions [0]");
}

bool all_models_satisfy(const std::vector<StratifiedModel>& ms, const CompiledFormulas& f,
                        std::vector<WorldSet>& scratch) {
  for (const StratifiedModel& m : ms) {
    if (f.evaluate_first(m, scratch) != m.all()) return false;
  }
  return true;
}

// Both unifier conditions, checked over the corpus directly from the images.
bool verify_gl_unifier(const Corpus& c, Formula f, const Substitution& theta) {
  std::vector<WorldSet> scratch;
  CompiledFormulas unified(apply_subst(theta, f));
  if (!all_models_satisfy(c.models, unified, scratch)) return false;
  CompiledFormulas premise(f);
  CompiledFormulas images(theta.images());
  std::vector<WorldSet> out;
  for (const StratifiedModel& m : c.models) {
    if (premise.evaluate_first(m, scratch) != m.all()) continue;
    images.evaluate(m, scratch, out);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (int w = 0; w < m.size(); ++w) {
        if (has(out[i], w) != static_cast<bool>((m.val(w) >> i) & 1U)) return false;
      }
    }
  }
  return true;
}

Substitution valuation_step(Formula g, Valuation v, std::size_t nvars) {
  std::vector<Formula> images;
  for (std::size_t i = 0; i < nvars; ++i) {
    Formula p = Formula::var(i);
    Formula fallback = (v >> i) & 1U ? Formula::top() : Formula::bot();
    images.push_back(Formula::disj(Formula::conj(g, p), Formula::conj(Formula::neg(g), fallback)));
  }
  return Substitution(std::move(images));
}

// Model action of valuation_step: points refuting g take valuation v.
bool act(std::vector<StratifiedModel>& ms, const CompiledFormulas& g, Valuation v,
         std::vector<WorldSet>& scratch) {
  bool changed = false;
  for (StratifiedModel& m : ms) {
    const WorldSet keep = g.evaluate_first(m, scratch);
    if (keep == m.all()) continue;
    std::vector<Valuation> val = m.valuation();
    for (int w = 0; w < m.size(); ++w) {
      if (!has(keep, w) && val[w] != v) {
        val[w] = v;
        changed = true;
      }
    }
    m = m.with_valuation(std::move(val));
  }
  return changed;
}

}  // namespace

Verdict gl_is_theorem(Formula body, const Bounds& b, std::size_t nvars) {
  require_sheet_formula(body);
  nvars = std::max(nvars, body.variable_bound());
  auto corpus = gl_corpus(nvars, b.gl_max_worlds, b);
  Verdict v;
  v.bound = BoundRecord{b.gl_max_worlds, 1, corpus->models.size(), !corpus->truncated};
  if (auto hit = first_refuting_model(*corpus, body)) {
    const StratifiedModel& m = corpus->models[*hit];
    const WorldSet refuted = m.all() & ~truth_set(m, body);
    v.countermodel = minimize_countermodel(PointedModel{m, std::countr_zero(refuted)}, body);
    v.bound.models_checked = *hit + 1;
    return v;
  }
  v.search_exhausted = !corpus->truncated;
  v.theorem = v.search_exhausted;
  return v;
}

GlExtensionResult gl_extension_property(Formula body, const Bounds& b, std::size_t nvars) {
  require_sheet_formula(body);
  nvars = std::max(nvars, body.variable_bound());
  auto corpus = gl_corpus(nvars, b.gl_max_worlds, b);
  GlExtensionResult r;
  r.search_complete = !corpus->truncated;
  CompiledFormulas f(body);
  std::vector<WorldSet> scratch;
  const Valuation nval = Valuation{1} << nvars;
  for (const StratifiedModel& m : corpus->models) {
    const WorldSet rest = m.all() & ~bit(m.root());
    if ((f.evaluate_first(m, scratch) & rest) != rest) continue;
    bool rescued = false;
    for (Valuation v = 0; v < nval && !rescued; ++v) {
      rescued = has(f.evaluate_first(variant(m, v), scratch), m.root());
    }
    if (!rescued) {
      r.holds = false;
      r.violation = m;
      return r;
    }
  }
  return r;
}

GlUnifierResult gl_projective_unifier(Formula body, const Bounds& b, std::size_t nvars) {
  require_sheet_formula(body);
  nvars = std::max(nvars, body.variable_bound());
  auto corpus = gl_corpus(nvars, b.gl_max_worlds, b);
  GlUnifierResult result;
  const Valuation nval = Valuation{1} << nvars;
  CompiledFormulas f(body);
  std::vector<WorldSet> scratch;

  auto accept = [&](const Substitution& theta) {
    if (!verify_gl_unifier(*corpus, body, theta)) return false;
    result.unifier = theta;
    return true;
  };

  if (all_models_satisfy(corpus->models, f, scratch) && accept(Substitution::identity(nvars))) {
    return result;
  }
  const Formula patterns[] = {body, Formula::conj(body, Formula::box(1, body))};
  // Single steps first: they give the smallest unifiers.
  for (Formula g : patterns) {
    for (Valuation v = 0; v < nval; ++v) {
      std::vector<StratifiedModel> cur = corpus->models;
      act(cur, CompiledFormulas(g), v, scratch);
      if (all_models_satisfy(cur, f, scratch) && accept(valuation_step(g, v, nvars))) {
        result.rounds = 1;
        return result;
      }
    }
  }
  for (Formula g : patterns) {
    CompiledFormulas guard(g);
    std::vector<StratifiedModel> cur = corpus->models;
    Substitution theta = Substitution::identity(nvars);
    for (int round = 1; round <= b.max_rounds; ++round) {
      bool changed = false;
      for (Valuation v = 0; v < nval; ++v) {
        theta = compose(theta, valuation_step(g, v, nvars));
        changed |= act(cur, guard, v, scratch);
        if (all_models_satisfy(cur, f, scratch) && accept(theta)) {
          result.rounds = round;
          return result;
        }
      }
      if (!changed) break;
    }
  }
  GlExtensionResult ext = gl_extension_property(body, b, nvars);
  if (!ext.holds) result.violation = ext.violation;
  return result;
}

}  // namespace j2kit
