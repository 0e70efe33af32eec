#include "j2kit/report_json.hpp"

#include "j2kit/model_json.hpp"

namespace j2kit {

using nlohmann::json;

std::string render_bounded(Formula f, const VarContext& ctx) {
  if (f.tree_size(kRenderCap + 1) > kRenderCap) return "<dag:" + std::to_string(f.dag_size()) + ">";
  return render(f, ctx);
}

json to_json(const Bounds& b) {
  return json{{"max_worlds", b.max_worlds},
              {"max_sheets", b.max_sheets},
              {"max_rounds", b.max_rounds},
              {"max_candidates", b.max_candidates},
              {"gl_max_worlds", b.gl_max_worlds},
              {"oracle_summands", b.oracle_summands},
              {"oracle_summand_worlds", b.oracle_summand_worlds},
              {"max_memory", b.max_memory}};
}

json to_json(const BoundRecord& b) {
  return json{{"max_worlds", b.max_worlds},
              {"max_sheets", b.max_sheets},
              {"models_checked", b.models_checked},
              {"corpus_complete", b.corpus_complete}};
}

json to_json(const Substitution& s, const VarContext& ctx) {
  json j = json::object();
  for (std::size_t i = 0; i < s.size(); ++i) j[ctx.name(i)] = render_bounded(s[i], ctx);
  return j;
}

json to_json(const Verdict& v, const VarContext& ctx) {
  return json{{"theorem", v.theorem},
              {"countermodel", v.countermodel ? pointed_model_to_json(*v.countermodel, ctx) : json(nullptr)},
              {"search_exhausted", v.search_exhausted},
              {"inconclusive", v.inconclusive()},
              {"bound", to_json(v.bound)}};
}

json to_json(const SatVerdict& v, const VarContext& ctx) {
  return json{{"satisfiable", v.satisfiable},
              {"model", v.model ? pointed_model_to_json(*v.model, ctx) : json(nullptr)},
              {"search_exhausted", v.search_exhausted},
              {"inconclusive", v.inconclusive()},
              {"bound", to_json(v.bound)}};
}

json to_json(const NType& t, const VarContext& ctx) {
  return json{{"n", t.n}, {"code", to_hex(t.code)}, {"representative", pointed_model_to_json(t.rep, ctx)}};
}

json to_json(const TypeUniverse& u, const VarContext& ctx) {
  json types = json::array();
  for (const NType& t : u.types) types.push_back(to_json(t, ctx));
  return json{{"n", u.n},
              {"variables", ctx.names()},
              {"count", u.types.size()},
              {"truncated", u.truncated},
              {"bound_worlds", u.bound_worlds},
              {"types", std::move(types)}};
}

json to_json(const ExtensionWitness& w, const VarContext& ctx) {
  return json{{"source", w.source}, {"summands", w.summands}, {"model", model_to_json(w.model, ctx)}};
}

json to_json(const ProjectivityReport& r, const VarContext& ctx) {
  return json{{"projective", r.projective},
              {"inconclusive", r.inconclusive()},
              {"unifier", r.unifier ? to_json(*r.unifier, ctx) : json(nullptr)},
              {"rounds_used", r.rounds_used},
              {"factors", r.factors},
              {"witness", r.witness ? to_json(*r.witness, ctx) : json(nullptr)},
              {"bounds", to_json(r.bounds)}};
}

json to_json(const RankInfo& r) {
  return json{{"per_world", r.per_world}, {"mu", r.mu ? json(*r.mu) : json(nullptr)}, {"n", r.n}};
}

json to_json(const ApproxResult& r, const VarContext& ctx) {
  json members = json::array();
  for (const ApproxMember& m : r.members) {
    json codes = json::array();
    for (const std::string& c : m.type_codes) codes.push_back(to_hex(c));
    members.push_back(json{{"psi", render_bounded(m.psi, ctx)},
                           {"unifier", to_json(m.unifier, ctx)},
                           {"types", std::move(codes)}});
  }
  return json{{"n", r.n},
              {"members", std::move(members)},
              {"s_size", r.s_size},
              {"candidates_examined", r.candidates_examined},
              {"exhaustive", r.exhaustive},
              {"universe_truncated", r.universe_truncated},
              {"bounds", to_json(r.bounds)}};
}

json to_json(const RuleVerdict& v, const VarContext& ctx) {
  return json{{"admissible", v.admissible},
              {"derivable", v.derivable},
              {"exhaustive", v.exhaustive},
              {"inconclusive", v.inconclusive()},
              {"failing_psi", v.failing_psi ? json(render_bounded(*v.failing_psi, ctx)) : json(nullptr)},
              {"failing_countermodel",
               v.failing_countermodel ? pointed_model_to_json(*v.failing_countermodel, ctx) : json(nullptr)},
              {"approximation", to_json(v.approx, ctx)}};
}

}  // namespace j2kit
