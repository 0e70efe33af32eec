// j2kit/model_json.hpp
//
// JSON form of models:
//   {"worlds":[int], "r0":[[int,int]], "r1":[[int,int]],
//    "val":{"<world>":["p1",...]}, "root":int}
// Import closes both relations and validates the frame.  Export writes the
// closed relations plus "sheets":[[int]] and "sheet_order":[[int,int]]
// (pairs of sheet indices, lower sheet first).

#ifndef J2KIT_MODEL_JSON_HPP
#define J2KIT_MODEL_JSON_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "j2kit/formula.hpp"
#include "j2kit/model.hpp"

namespace j2kit {

/// Variable names used in "val", in order of first appearance.
std::vector<std::string> model_variable_names(const nlohmann::json& j);

/// Throws ModelError on schema errors or names missing from ctx.  A missing
/// root is filled in when exactly one world generates the model.
RawModel raw_model_from_json(const nlohmann::json& j, const VarContext& ctx);

/// raw_model_from_json, relation closure and stratify.
StratifiedModel model_from_json(const nlohmann::json& j, const VarContext& ctx);

nlohmann::json raw_model_to_json(const RawModel& m, const VarContext& ctx);
nlohmann::json model_to_json(const StratifiedModel& m, const VarContext& ctx);
/// model_to_json plus "point" (a world id).
nlohmann::json pointed_model_to_json(const PointedModel& w, const VarContext& ctx);

}  // namespace j2kit

#endif  // J2KIT_MODEL_JSON_HPP
