#include "j2kit/model_json.hpp"

#include <algorithm>
#include <set>

namespace j2kit {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw ModelError("model JSON: " + what); }

std::vector<std::pair<int, int>> read_pairs(const json& j, const char* key) {
  std::vector<std::pair<int, int>> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  if (!arr.is_array()) schema_error(std::string(key) + " must be an array of pairs");
  for (const json& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      schema_error(std::string(key) + " entries must be [int, int]");
    }
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

// The unique world from which every world is reachable, if any.
std::optional<int> infer_root(const RawModel& m) {
  std::optional<int> found;
  for (int r : m.worlds) {
    std::set<int> reach{r};
    std::vector<int> todo{r};
    while (!todo.empty()) {
      int x = todo.back();
      todo.pop_back();
      for (const auto* rel : {&m.r0, &m.r1}) {
        for (auto [a, b] : *rel) {
          if (a == x && reach.insert(b).second) todo.push_back(b);
        }
      }
    }
    if (reach.size() == m.worlds.size()) {
      if (found) return std::nullopt;
      found = r;
    }
  }
  return found;
}

}  // namespace

std::vector<std::string> model_variable_names(const json& j) {
  std::vector<std::string> names;
  if (!j.is_object() || !j.contains("val") || !j.at("val").is_object()) return names;
  for (const auto& [world, vars] : j.at("val").items()) {
    if (!vars.is_array()) continue;
    for (const json& v : vars) {
      if (!v.is_string()) continue;
      auto s = v.get<std::string>();
      if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);
    }
  }
  return names;
}

RawModel raw_model_from_json(const json& j, const VarContext& ctx) {
  if (!j.is_object()) schema_error("expected an object");
  if (!j.contains("worlds") || !j.at("worlds").is_array()) schema_error("missing \"worlds\" array");
  RawModel m;
  for (const json& w : j.at("worlds")) {
    if (!w.is_number_integer()) schema_error("world ids must be integers");
    m.worlds.push_back(w.get<int>());
  }
  if (m.worlds.empty()) schema_error("no worlds");
  if (std::set<int>(m.worlds.begin(), m.worlds.end()).size() != m.worlds.size()) {
    schema_error("duplicate world id");
  }
  m.r0 = read_pairs(j, "r0");
  m.r1 = read_pairs(j, "r1");
  if (j.contains("val")) {
    if (!j.at("val").is_object()) schema_error("\"val\" must be an object");
    for (const auto& [key, vars] : j.at("val").items()) {
      int world = 0;
      try {
        std::size_t used = 0;
        world = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        schema_error("\"val\" keys must be world ids, got \"" + key + "\"");
      }
      if (!vars.is_array()) schema_error("\"val\" entries must be arrays of variable names");
      Valuation v = 0;
      for (const json& name : vars) {
        if (!name.is_string()) schema_error("variable names must be strings");
        auto idx = ctx.index_of(name.get<std::string>());
        if (!idx) schema_error("variable \"" + name.get<std::string>() + "\" is not in the context");
        v |= Valuation{1} << *idx;
      }
      m.val[world] = v;
    }
  }
  if (j.contains("root")) {
    if (!j.at("root").is_number_integer()) schema_error("\"root\" must be an integer");
    m.root = j.at("root").get<int>();
  }
  const std::set<int> known(m.worlds.begin(), m.worlds.end());
  auto check = [&](int w) {
    if (!known.contains(w)) schema_error("unknown world " + std::to_string(w));
  };
  for (const auto* rel : {&m.r0, &m.r1}) {
    for (auto [a, b] : *rel) {
      check(a);
      check(b);
    }
  }
  for (const auto& [w, v] : m.val) check(w);
  if (m.root) check(*m.root);
  return m;
}

StratifiedModel model_from_json(const json& j, const VarContext& ctx) {
  RawModel m = close_relations(raw_model_from_json(j, ctx));
  if (!m.root) {
    m.root = infer_root(m);
    if (!m.root) throw NoRoot("model JSON: no \"root\" given and no unique generating world");
  }
  return stratify(m);
}

json raw_model_to_json(const RawModel& m, const VarContext& ctx) {
  json j;
  j["worlds"] = m.worlds;
  auto pairs = [](std::vector<std::pair<int, int>> rel) {
    std::sort(rel.begin(), rel.end());
    json arr = json::array();
    for (auto [a, b] : rel) arr.push_back({a, b});
    return arr;
  };
  j["r0"] = pairs(m.r0);
  j["r1"] = pairs(m.r1);
  json val = json::object();
  for (int w : m.worlds) {
    json names = json::array();
    auto it = m.val.find(w);
    const Valuation v = it == m.val.end() ? 0 : it->second;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if ((v >> i) & 1U) names.push_back(ctx.name(i));
    }
    val[std::to_string(w)] = std::move(names);
  }
  j["val"] = std::move(val);
  if (m.root) j["root"] = *m.root;
  return j;
}

json model_to_json(const StratifiedModel& m, const VarContext& ctx) {
  for (int w = 0; w < m.size(); ++w) {
    if (m.val(w) >> ctx.size()) throw ModelError("model uses variables outside the context");
  }
  json j = raw_model_to_json(to_raw(m), ctx);
  json sheets = json::array();
  for (const Sheet& s : m.sheets()) {
    json ids = json::array();
    for (int w : s.worlds) ids.push_back(m.id(w));
    sheets.push_back(std::move(ids));
  }
  json order = json::array();
  const int ns = static_cast<int>(m.sheets().size());
  for (int a = 0; a < ns; ++a) {
    for (int b = 0; b < ns; ++b) {
      if (m.sheet_less(a, b)) order.push_back({a, b});
    }
  }
  j["sheets"] = std::move(sheets);
  j["sheet_order"] = std::move(order);
  return j;
}

json pointed_model_to_json(const PointedModel& w, const VarContext& ctx) {
  json j = model_to_json(w.model, ctx);
  j["point"] = w.model.id(w.point);
  return j;
}

}  // namespace j2kit
