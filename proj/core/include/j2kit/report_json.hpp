// j2kit/report_json.hpp
//
// JSON for verdicts and reports.  Models use the model_json schema,
// substitutions are {"p1": "<formula>", ...} and type codes are hex.
// Formulas whose tree expansion exceeds kRenderCap nodes are written as
// "<dag:N>" with N the number of distinct subformulas.

#ifndef J2KIT_REPORT_JSON_HPP
#define J2KIT_REPORT_JSON_HPP

#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

#include "j2kit/bisim.hpp"
#include "j2kit/decide.hpp"
#include "j2kit/formula.hpp"
#include "j2kit/unify.hpp"

namespace j2kit {

inline constexpr std::size_t kRenderCap = std::size_t{1} << 16;

std::string render_bounded(Formula f, const VarContext& ctx);

nlohmann::json to_json(const Bounds& b);
nlohmann::json to_json(const BoundRecord& b);
nlohmann::json to_json(const Substitution& s, const VarContext& ctx);
nlohmann::json to_json(const Verdict& v, const VarContext& ctx);
nlohmann::json to_json(const SatVerdict& v, const VarContext& ctx);
nlohmann::json to_json(const NType& t, const VarContext& ctx);
nlohmann::json to_json(const TypeUniverse& u, const VarContext& ctx);
nlohmann::json to_json(const ExtensionWitness& w, const VarContext& ctx);
nlohmann::json to_json(const ProjectivityReport& r, const VarContext& ctx);
nlohmann::json to_json(const RankInfo& r);
nlohmann::json to_json(const ApproxResult& r, const VarContext& ctx);
nlohmann::json to_json(const RuleVerdict& v, const VarContext& ctx);

}  // namespace j2kit

#endif  // J2KIT_REPORT_JSON_HPP
