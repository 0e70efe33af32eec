#include "j2kit/decide.hpp"

#include <bit>

#include "j2kit/evaluator.hpp"
#include "parallel.hpp"

namespace j2kit {

std::optional<std::size_t> first_refuting_model(const Corpus& c, Formula f) {
  CompiledFormulas compiled(f);
  return detail::find_first<std::vector<WorldSet>>(
      c.models.size(), [&](std::size_t i, std::vector<WorldSet>& scratch) {
        const StratifiedModel& m = c.models[i];
        return compiled.evaluate_first(m, scratch) != m.all();
      });
}

PointedModel minimize_countermodel(const PointedModel& w, Formula f) {
  PointedModel g = generated_submodel(w.model, w.point);
  StratifiedModel m = g.model;
  CompiledFormulas compiled(f);
  std::vector<WorldSet> scratch;
  WorldSet keep = m.all();
  for (int x = m.size() - 1; x >= 0; --x) {
    if (x == m.root()) continue;
    StratifiedModel sub = induced_submodel(m, keep & ~bit(x), m.root());
    if (!has(compiled.evaluate_first(sub, scratch), sub.root())) keep &= ~bit(x);
  }
  StratifiedModel small = canonicalize(induced_submodel(m, keep, m.root()));
  return PointedModel{small, small.root()};
}

Verdict is_theorem(Formula f, const Bounds& b, std::size_t nvars) {
  nvars = std::max(nvars, f.variable_bound());
  auto corpus = j2_corpus(nvars, b);
  Verdict v;
  v.bound = BoundRecord{b.max_worlds, b.max_sheets, corpus->models.size(), !corpus->truncated};
  auto hit = first_refuting_model(*corpus, f);
  if (hit) {
    const StratifiedModel& m = corpus->models[*hit];
    WorldSet refuted = m.all() & ~truth_set(m, f);
    v.countermodel = minimize_countermodel(PointedModel{m, std::countr_zero(refuted)}, f);
    v.bound.models_checked = *hit + 1;
    v.search_exhausted = false;
    return v;
  }
  v.search_exhausted = !corpus->truncated;
  v.theorem = v.search_exhausted;
  return v;
}

Verdict consequence(Formula premise, Formula conclusion, const Bounds& b, std::size_t nvars) {
  Formula hyp = Formula::conj(premise,
                              Formula::conj(Formula::box(0, premise), Formula::box(1, premise)));
  return is_theorem(Formula::implies(hyp, conclusion), b,
                    std::max({nvars, premise.variable_bound(), conclusion.variable_bound()}));
}

SatVerdict is_satisfiable(Formula f, const Bounds& b, std::size_t nvars) {
  Verdict v = is_theorem(Formula::neg(f), b, nvars);
  SatVerdict s;
  s.bound = v.bound;
  s.satisfiable = v.countermodel.has_value();
  s.model = v.countermodel;
  s.search_exhausted = v.search_exhausted || s.satisfiable;
  return s;
}

}  // namespace j2kit
