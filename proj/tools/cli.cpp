#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "j2kit/bisim.hpp"
#include "j2kit/decide.hpp"
#include "j2kit/model_json.hpp"
#include "j2kit/report_json.hpp"
#include "j2kit/unify.hpp"

namespace j2kit::cli {

using nlohmann::json;

namespace {

struct InputError : std::runtime_error {
  InputError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(kNoInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(kBadInput, path + ": " + e.what());
  }
}

bool is_model_path(const std::string& s) { return s.size() > 5 && s.ends_with(".json"); }

class Session {
 public:
  explicit Session(const Invocation& inv) {
    std::vector<std::string> texts;
    for (const std::string& s : inv.inputs) {
      if (is_model_path(s)) {
        models_.emplace(s, read_json_file(s));
        for (std::string& name : model_variable_names(models_.at(s))) texts.push_back(std::move(name));
      } else {
        texts.push_back(s);
      }
    }
    if (inv.variables) {
      ctx_ = VarContext(*inv.variables);
    } else {
      try {
        ctx_ = infer_context(texts);
      } catch (const ParseError& e) {
        throw InputError(kBadInput, std::string("parse error: ") + e.what());
      }
    }
  }

  const VarContext& ctx() const { return ctx_; }
  std::size_t nvars() const { return ctx_.size(); }

  Formula formula(const std::string& text) const {
    try {
      return parse(text, ctx_);
    } catch (const ParseError& e) {
      throw InputError(kBadInput, "parse error at byte " + std::to_string(e.offset()) + ": " + e.what());
    } catch (const UnknownVariable& e) {
      throw InputError(kBadInput, e.what());
    }
  }

  const json& model_json(const std::string& path) const {
    auto it = models_.find(path);
    if (it == models_.end()) throw InputError(kUsage, "expected a model file (*.json), got " + path);
    return it->second;
  }

  StratifiedModel model(const std::string& path) const {
    try {
      return model_from_json(model_json(path), ctx_);
    } catch (const ModelError& e) {
      throw InputError(kBadInput, path + ": " + e.what());
    }
  }

  int index_of_world(const StratifiedModel& m, std::optional<int> id) const {
    if (!id) return m.root();
    auto w = m.index_of_id(*id);
    if (!w) throw InputError(kUsage, "no world " + std::to_string(*id) + " in the model");
    return *w;
  }

 private:
  VarContext ctx_;
  std::map<std::string, json> models_;
};

void need_inputs(const Invocation& inv, std::size_t n) {
  if (inv.inputs.size() != n) {
    throw InputError(kUsage, inv.command + " expects " + std::to_string(n) + " argument(s)");
  }
}

std::string dump_model(const json& j) { return j.dump(); }

// Why two pointed models are not n-bisimilar: a valuation mismatch or a
// successor on one side with no (n-1)-bisimilar partner on the other.
json bisim_break(const PointedModel& a, const PointedModel& b, int n, const VarContext& ctx) {
  if (a.model.val(a.point) != b.model.val(b.point)) {
    return json{{"reason", "valuation"}, {"a", a.model.id(a.point)}, {"b", b.model.id(b.point)}};
  }
  const auto ca = world_codes(a.model, n - 1);
  const auto cb = world_codes(b.model, n - 1);
  for (int rel = 0; rel <= 1; ++rel) {
    for (int side = 0; side <= 1; ++side) {
      const PointedModel& x = side == 0 ? a : b;
      const PointedModel& y = side == 0 ? b : a;
      const auto& cx = side == 0 ? ca : cb;
      const auto& cy = side == 0 ? cb : ca;
      std::unordered_set<std::string> partner;
      for (int v = 0; v < y.model.size(); ++v) {
        if (has(y.model.succ(rel, y.point), v)) partner.insert(cy[v]);
      }
      for (int u = 0; u < x.model.size(); ++u) {
        if (!has(x.model.succ(rel, x.point), u) || partner.contains(cx[u])) continue;
        return json{{"reason", side == 0 ? "forth" : "back"},
                    {"relation", rel},
                    {"model", side == 0 ? "a" : "b"},
                    {"successor", x.model.id(u)},
                    {"successor_type", render(char_formula(PointedModel{x.model, u}, n - 1, ctx.size()), ctx)}};
      }
    }
  }
  return json{{"reason", "unknown"}};
}

struct Result {
  int code = kAffirmative;
  json payload;
  std::string text;
};

Result verdict_result(const Verdict& v, const VarContext& ctx, const char* yes, const char* no) {
  Result r;
  r.payload = to_json(v, ctx);
  if (v.theorem) {
    r.text = yes;
  } else if (v.countermodel) {
    r.code = kNegative;
    r.text = std::string(no) + "\ncountermodel: " + dump_model(pointed_model_to_json(*v.countermodel, ctx));
  } else {
    r.code = kInconclusive;
    r.text = "inconclusive: corpus cut short";
  }
  return r;
}

Result dispatch(const Invocation& inv, const Session& s) {
  const VarContext& ctx = s.ctx();
  const Bounds& b = inv.bounds;
  const std::string& cmd = inv.command;
  Result r;

  if (cmd == "parse") {
    if (inv.inputs.empty()) throw InputError(kUsage, "parse expects at least one formula");
    json arr = json::array();
    for (const std::string& text : inv.inputs) {
      Formula f = s.formula(text);
      const std::string shown =
          render(f, ctx, inv.parenthesized ? RenderMode::FullyParenthesized : RenderMode::Sugared);
      arr.push_back(json{{"input", text}, {"formula", shown}, {"depth", f.depth()}});
      r.text += shown + "\t(depth " + std::to_string(f.depth()) + ")\n";
    }
    r.payload = json{{"formulas", std::move(arr)}};
    if (!r.text.empty()) r.text.pop_back();
    return r;
  }

  if (cmd == "validate-frame") {
    need_inputs(inv, 1);
    RawModel raw;
    try {
      raw = close_relations(raw_model_from_json(s.model_json(inv.inputs[0]), ctx));
    } catch (const ModelError& e) {
      throw InputError(kBadInput, e.what());
    }
    FrameReport rep = validate_frame(raw);
    json violations = json::array();
    for (const FrameViolation& v : rep.violations) {
      violations.push_back(json{{"condition", v.condition}, {"witness", v.witness}});
      r.text += "violated: " + v.condition + " at " + json(v.witness).dump() + "\n";
    }
    r.payload = json{{"ignatiev_ok", rep.ignatiev_ok},
                     {"j2_ok", rep.j2_ok},
                     {"stratified_ok", rep.stratified_ok},
                     {"violations", std::move(violations)}};
    r.code = rep.all_ok() ? kAffirmative : kNegative;
    r.text = (rep.all_ok() ? "valid stratified J2 frame\n" : "not a stratified J2 frame\n") + r.text;
    r.text.pop_back();
    return r;
  }

  if (cmd == "model-check") {
    need_inputs(inv, 2);
    StratifiedModel m = s.model(inv.inputs[0]);
    Formula f = s.formula(inv.inputs[1]);
    const WorldSet truth = truth_set(m, f);
    json refuting = json::array();
    for (int w = 0; w < m.size(); ++w) {
      if (!has(truth, w)) refuting.push_back(m.id(w));
    }
    bool holds = false;
    if (inv.world) {
      holds = has(truth, s.index_of_world(m, inv.world));
      r.payload["world"] = *inv.world;
    } else {
      holds = refuting.empty();
    }
    r.payload["holds"] = holds;
    r.payload["refuting_worlds"] = refuting;
    r.code = holds ? kAffirmative : kNegative;
    r.text = holds ? "holds" : "fails; refuting worlds: " + refuting.dump();
    return r;
  }

  if (cmd == "prove") {
    need_inputs(inv, 1);
    return verdict_result(is_theorem(s.formula(inv.inputs[0]), b, s.nvars()), ctx, "theorem",
                          "not a theorem");
  }

  if (cmd == "sat") {
    need_inputs(inv, 1);
    SatVerdict v = is_satisfiable(s.formula(inv.inputs[0]), b, s.nvars());
    r.payload = to_json(v, ctx);
    if (v.satisfiable) {
      r.text = "satisfiable\nmodel: " + dump_model(pointed_model_to_json(*v.model, ctx));
    } else if (v.search_exhausted) {
      r.code = kNegative;
      r.text = "unsatisfiable within the bounds";
    } else {
      r.code = kInconclusive;
      r.text = "inconclusive: corpus cut short";
    }
    return r;
  }

  if (cmd == "bisim") {
    need_inputs(inv, 2);
    StratifiedModel ma = s.model(inv.inputs[0]);
    StratifiedModel mb = s.model(inv.inputs[1]);
    PointedModel a{ma, s.index_of_world(ma, inv.world)};
    PointedModel bm{mb, s.index_of_world(mb, inv.other_world)};
    const bool same = nbisimilar(a, bm, inv.depth);
    r.payload = json{{"n", inv.depth}, {"bisimilar", same}};
    if (same) {
      r.text = std::to_string(inv.depth) + "-bisimilar";
    } else {
      r.code = kNegative;
      json why = bisim_break(a, bm, inv.depth, ctx);
      r.payload["witness"] = why;
      r.text = "not " + std::to_string(inv.depth) + "-bisimilar: " + why.dump();
    }
    return r;
  }

  if (cmd == "charform") {
    need_inputs(inv, 1);
    StratifiedModel m = s.model(inv.inputs[0]);
    PointedModel w{m, s.index_of_world(m, inv.world)};
    Formula f = char_formula(w, inv.depth, s.nvars());
    r.text = render(f, ctx);
    r.payload = json{{"n", inv.depth}, {"formula", r.text}, {"code", to_hex(point_code(w, inv.depth))}};
    return r;
  }

  if (cmd == "types") {
    need_inputs(inv, 0);
    const VarContext tctx = inv.variables ? ctx : VarContext::standard(inv.nvars);
    TypeUniverse u = enumerate_types(tctx.size(), inv.depth, b);
    r.payload = to_json(u, tctx);
    r.text = std::to_string(u.types.size()) + " types at depth " + std::to_string(u.n) + " over " +
             std::to_string(tctx.size()) + " variable(s)" + (u.truncated ? " (possibly incomplete)" : "");
    for (const NType& t : u.types) r.text += "\n" + to_hex(t.code) + "\t" + render(char_formula(t.rep, u.n, tctx.size()), tctx);
    return r;
  }

  if (cmd == "projective") {
    need_inputs(inv, 1);
    ProjectivityReport rep = projective_unifier(s.formula(inv.inputs[0]), b, s.nvars());
    r.payload = to_json(rep, ctx);
    if (rep.projective) {
      r.text = "projective\nunifier: " + to_json(*rep.unifier, ctx).dump();
    } else if (rep.witness) {
      r.code = kNegative;
      r.text = "not projective\nwitness (" + rep.witness->source + "): " + dump_model(model_to_json(rep.witness->model, ctx));
    } else {
      r.code = kInconclusive;
      r.text = "inconclusive: no unifier and no extension-property violation within the bounds";
    }
    return r;
  }

  if (cmd == "approx" || cmd == "unify-basis") {
    need_inputs(inv, 1);
    ApproxResult a = projective_approximation(s.formula(inv.inputs[0]), b, s.nvars());
    r.payload = to_json(a, ctx);
    const bool complete = a.exhaustive && !a.universe_truncated;
    for (const ApproxMember& m : a.members) {
      r.text += "\n" + (cmd == "approx" ? render_bounded(m.psi, ctx) : to_json(m.unifier, ctx).dump());
    }
    r.text = std::to_string(a.members.size()) + (cmd == "approx" ? " member(s)" : " unifier(s)") +
             (complete ? "" : " (search incomplete)") + r.text;
    if (!complete) {
      r.code = kInconclusive;
    } else if (cmd == "unify-basis" && a.members.empty()) {
      r.code = kNegative;
      r.text += "\nnot unifiable";
    }
    return r;
  }

  if (cmd == "admissible") {
    need_inputs(inv, 2);
    RuleVerdict v = is_admissible(s.formula(inv.inputs[0]), s.formula(inv.inputs[1]), b, s.nvars());
    r.payload = to_json(v, ctx);
    const std::string derivable = v.derivable ? "derivable" : "not derivable";
    if (!v.admissible) {
      r.code = kNegative;
      r.text = "not admissible (" + derivable + ")\nfailing psi: " + render_bounded(*v.failing_psi, ctx);
      if (v.failing_countermodel) {
        r.text += "\ncountermodel: " + dump_model(pointed_model_to_json(*v.failing_countermodel, ctx));
      }
    } else if (v.exhaustive) {
      r.text = "admissible (" + derivable + ")";
    } else {
      r.code = kInconclusive;
      r.text = "inconclusive: no failing psi found, approximation incomplete (" + derivable + ")";
    }
    return r;
  }

  throw InputError(kUsage, "unknown command " + cmd);
}

std::optional<std::size_t> memory_from_env() {
  const char* v = std::getenv("J2KIT_MAX_MEM");
  if (!v || !*v) return std::nullopt;
  std::string s(v);
  std::size_t mult = 1;
  switch (s.back()) {
    case 'k': case 'K': mult = std::size_t{1} << 10; s.pop_back(); break;
    case 'm': case 'M': mult = std::size_t{1} << 20; s.pop_back(); break;
    case 'g': case 'G': mult = std::size_t{1} << 30; s.pop_back(); break;
    default: break;
  }
  std::size_t used = 0;
  const unsigned long long n = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument(v);
  return static_cast<std::size_t>(n) * mult;
}

}  // namespace

Outcome run(const Invocation& inv) {
  Outcome o;
  try {
    Session s(inv);
    Result r = dispatch(inv, s);
    o.exit_code = r.code;
    if (inv.json) {
      json j{{"command", inv.command},
             {"variables", s.ctx().names()},
             {"bounds", to_json(inv.bounds)},
             {"exit", r.code},
             {"result", std::move(r.payload)}};
      o.out = j.dump(2) + "\n";
    } else {
      o.out = r.text + "\n";
    }
  } catch (const InputError& e) {
    o.exit_code = e.code;
    o.err = std::string("j2kit: ") + e.what() + "\n";
  } catch (const BoundExhausted& e) {
    o.exit_code = kInconclusive;
    o.err = std::string("j2kit: bound exhausted: ") + e.what() + "\n";
    if (inv.json) o.out = json{{"command", inv.command}, {"exit", kInconclusive}, {"error", e.what()}}.dump(2) + "\n";
  } catch (const std::invalid_argument& e) {
    o.exit_code = kUsage;
    o.err = std::string("j2kit: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    o.exit_code = kInternal;
    o.err = std::string("j2kit: internal error: ") + e.what() + "\n";
  }
  return o;
}

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"j2kit: unification and admissible rules for the bimodal provability logic J2"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  Invocation inv;
  std::string vars;
  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", inv.json, "Machine-readable output");
    sub->add_option("--vars", vars, "Variable context, comma separated (default: from the inputs)");
    sub->add_option("--max-worlds", inv.bounds.max_worlds, "Largest model in the search corpus")
        ->check(CLI::Range(1, 64));
    sub->add_option("--max-sheets", inv.bounds.max_sheets, "Most 1-sheets in a corpus model")
        ->check(CLI::Range(1, 64));
    sub->add_option("--max-rounds", inv.bounds.max_rounds, "Unifier iteration rounds")->check(CLI::PositiveNumber);
    sub->add_option("--max-candidates", inv.bounds.max_candidates, "Cap on enumerated candidates")
        ->check(CLI::PositiveNumber);
  };
  struct Spec {
    const char* name;
    const char* help;
    const char* args;
  };
  const Spec specs[] = {
      {"parse", "Parse and render formulas", "formulas"},
      {"validate-frame", "Check the frame conditions of a model file", "model"},
      {"model-check", "Evaluate a formula on a model (globally, or at --world)", "model formula"},
      {"prove", "Decide theoremhood", "formula"},
      {"sat", "Decide satisfiability", "formula"},
      {"bisim", "Decide n-bisimilarity of two pointed models", "model model"},
      {"charform", "Characteristic formula of a pointed model", "model"},
      {"types", "Enumerate n-types", ""},
      {"projective", "Decide projectivity and build a projective unifier", "formula"},
      {"unify-basis", "Finite basis of unifiers", "formula"},
      {"approx", "Projective approximation", "formula"},
      {"admissible", "Decide admissibility of the rule premise/conclusion", "premise conclusion"},
  };
  for (const Spec& sp : specs) {
    CLI::App* sub = app.add_subcommand(sp.name, sp.help);
    common(sub);
    if (*sp.args) sub->add_option("inputs", inv.inputs, sp.args)->required();
    const std::string name = sp.name;
    if (name == "model-check" || name == "charform" || name == "bisim") {
      sub->add_option("-w,--world", inv.world, "World id (default: the root)");
    }
    if (name == "bisim") sub->add_option("--world-b", inv.other_world, "World id in the second model");
    if (name == "bisim" || name == "charform" || name == "types") {
      sub->add_option("-n,--depth", inv.depth, "Depth")->check(CLI::NonNegativeNumber);
    }
    if (name == "types") sub->add_option("--nvars", inv.nvars, "Variables p1..pk")->check(CLI::Range(0, 4));
    if (name == "parse") sub->add_flag("--parens", inv.parenthesized, "Fully parenthesized output");
    sub->callback([&inv, name] { inv.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int rc = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return rc == 0 ? 0 : kUsage;
  }
  if (!vars.empty()) {
    std::vector<std::string> names;
    std::stringstream ss(vars);
    for (std::string v; std::getline(ss, v, ',');) names.push_back(v);
    inv.variables = std::move(names);
  }
  try {
    if (auto mem = memory_from_env()) inv.bounds.max_memory = *mem;
  } catch (const std::exception&) {
    err << "j2kit: J2KIT_MAX_MEM must be a byte count (k/M/G suffix allowed)\n";
    return kUsage;
  }
  Outcome o = run(inv);
  out << o.out;
  err << o.err;
  return o.exit_code;
}

}  // namespace j2kit::cli
