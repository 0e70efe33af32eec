#include "j2kit/model.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <unordered_map>

namespace j2kit {

namespace {

void close_transitively(std::vector<WorldSet>& rel) {
  const int n = static_cast<int>(rel.size());
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (has(rel[i], k)) rel[i] |= rel[k];
    }
  }
}

// World ids -> dense indices in the order of `worlds`.
struct Indexed {
  std::unordered_map<int, int> index;
  std::vector<WorldSet> r0, r1;
  int n = 0;
};

Indexed index_raw(const RawModel& m) {
  Indexed ix;
  ix.n = static_cast<int>(m.worlds.size());
  if (ix.n > kMaxWorlds) throw ModelError("model has more than 64 worlds");
  for (int i = 0; i < ix.n; ++i) {
    if (!ix.index.emplace(m.worlds[i], i).second) {
      throw ModelError("duplicate world id " + std::to_string(m.worlds[i]));
    }
  }
  auto lookup = [&](int id) {
    auto it = ix.index.find(id);
    if (it == ix.index.end()) throw ModelError("relation mentions unknown world " + std::to_string(id));
    return it->second;
  };
  ix.r0.assign(ix.n, 0);
  ix.r1.assign(ix.n, 0);
  for (auto [a, b] : m.r0) ix.r0[lookup(a)] |= bit(lookup(b));
  for (auto [a, b] : m.r1) ix.r1[lookup(a)] |= bit(lookup(b));
  for (const auto& [w, v] : m.val) {
    (void)v;
    if (!ix.index.contains(w)) throw ModelError("valuation mentions unknown world " + std::to_string(w));
  }
  if (m.root && !ix.index.contains(*m.root)) {
    throw ModelError("root is not a world: " + std::to_string(*m.root));
  }
  return ix;
}

}  // namespace

RawModel close_relations(RawModel m) {
  Indexed ix = index_raw(m);
  close_transitively(ix.r0);
  close_transitively(ix.r1);
  m.r0.clear();
  m.r1.clear();
  for (int x = 0; x < ix.n; ++x) {
    for (int y = 0; y < ix.n; ++y) {
      if (has(ix.r0[x], y)) m.r0.emplace_back(m.worlds[x], m.worlds[y]);
      if (has(ix.r1[x], y)) m.r1.emplace_back(m.worlds[x], m.worlds[y]);
    }
  }
  return m;
}

FrameReport validate_frame(const RawModel& m) {
  Indexed ix = index_raw(m);
  FrameReport report;
  const int n = ix.n;
  const std::vector<WorldSet>* rel[2] = {&ix.r0, &ix.r1};
  auto id = [&](int i) { return m.worlds[i]; };
  auto note = [&](bool& flag, const std::string& tag, std::vector<int> witness) {
    flag = false;
    for (const auto& v : report.violations) {
      if (v.condition == tag) return;
    }
    report.violations.push_back({tag, std::move(witness)});
  };

  // (a) strict partial orders; finiteness gives converse well-foundedness.
  for (int i = 0; i < 2; ++i) {
    const auto& r = *rel[i];
    const std::string name = "R" + std::to_string(i);
    for (int x = 0; x < n; ++x) {
      if (has(r[x], x)) note(report.ignatiev_ok, name + "-irreflexive", {id(x)});
      for (int y = 0; y < n; ++y) {
        if (!has(r[x], y)) continue;
        WorldSet missing = r[y] & ~r[x];
        if (missing) {
          int z = std::countr_zero(missing);
          note(report.ignatiev_ok, name + "-transitive", {id(x), id(y), id(z)});
        }
      }
    }
  }
  // (b) x R1 y => (x R0 z <=> y R0 z)
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (!has(ix.r1[x], y)) continue;
      WorldSet diff = ix.r0[x] ^ ix.r0[y];
      if (diff) {
        int z = std::countr_zero(diff);
        note(report.ignatiev_ok, "ignatiev-coherence", {id(x), id(y), id(z)});
      }
    }
  }
  // (c) x R_m y & y R_n z => x R_m z, m <= n
  for (auto [mi, ni] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
    const auto& rm = *rel[mi];
    const auto& rn = *rel[ni];
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        if (!has(rm[x], y)) continue;
        WorldSet missing = rn[y] & ~rm[x];
        if (missing) {
          int z = std::countr_zero(missing);
          note(report.j2_ok,
               "j2-composition[" + std::to_string(mi) + "," + std::to_string(ni) + "]",
               {id(x), id(y), id(z)});
        }
      }
    }
  }
  // (S) z R0 x & y R1 x => z R0 y
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (!has(ix.r1[y], x)) continue;
      for (int z = 0; z < n; ++z) {
        if (has(ix.r0[z], x) && !has(ix.r0[z], y)) {
          note(report.stratified_ok, "stratification", {id(x), id(y), id(z)});
        }
      }
    }
  }
  return report;
}

StratifiedModel StratifiedModel::from_parts(Parts p) {
  const int n = static_cast<int>(p.val.size());
  if (n == 0) throw NoRoot("model has no worlds");
  if (n > kMaxWorlds) throw ModelError("model has more than 64 worlds");
  if (static_cast<int>(p.sheet_of.size()) != n || static_cast<int>(p.r1.size()) != n) {
    throw ModelError("inconsistent model parts");
  }
  if (p.root < 0 || p.root >= n) throw NoRoot("root out of range");
  if (p.ids.empty()) {
    p.ids.resize(n);
    std::iota(p.ids.begin(), p.ids.end(), 0);
  }
  if (static_cast<int>(p.ids.size()) != n) throw ModelError("inconsistent world ids");
  const int ps = static_cast<int>(p.sheet_above.size());
  if (ps > 64) throw ModelError("more than 64 sheets");
  for (int w = 0; w < n; ++w) {
    if (p.sheet_of[w] < 0 || p.sheet_of[w] >= ps) throw ModelError("sheet index out of range");
  }

  close_transitively(p.r1);
  std::vector<WorldSet> order(p.sheet_above.begin(), p.sheet_above.end());
  close_transitively(order);
  for (int s = 0; s < ps; ++s) {
    if (has(order[s], s)) throw NotStratified("sheet order has a cycle");
  }
  for (int x = 0; x < n; ++x) {
    if (has(p.r1[x], x)) throw NotStratified("R1 has a cycle");
    for (int y = 0; y < n; ++y) {
      if (has(p.r1[x], y) && p.sheet_of[x] != p.sheet_of[y]) {
        throw NotStratified("R1 edge between different sheets");
      }
    }
  }

  // E1-classes: connected components of R1 viewed as an undirected graph.
  std::vector<int> comp(n, -1);
  std::vector<Sheet> sheets;
  for (int w = 0; w < n; ++w) {
    if (comp[w] >= 0) continue;
    const int c = static_cast<int>(sheets.size());
    Sheet sh;
    std::vector<int> stack{w};
    comp[w] = c;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      sh.mask |= bit(x);
      for (int y = 0; y < n; ++y) {
        if (comp[y] < 0 && (has(p.r1[x], y) || has(p.r1[y], x))) {
          comp[y] = c;
          stack.push_back(y);
        }
      }
    }
    for (int x = 0; x < n; ++x) {
      if (has(sh.mask, x)) sh.worlds.push_back(x);
    }
    sheets.push_back(std::move(sh));
  }
  const int ns = static_cast<int>(sheets.size());
  if (ns > 64) throw ModelError("more than 64 sheets");

  StratifiedModel m;
  m.sheet_above_.assign(ns, 0);
  for (int a = 0; a < ns; ++a) {
    for (int b = 0; b < ns; ++b) {
      int pa = p.sheet_of[sheets[a].worlds.front()];
      int pb = p.sheet_of[sheets[b].worlds.front()];
      if (has(order[pa], pb)) m.sheet_above_[a] |= std::uint64_t{1} << b;
    }
  }
  m.sheet_of_ = comp;
  m.r1_ = std::move(p.r1);
  m.r0_.assign(n, 0);
  for (int x = 0; x < n; ++x) {
    for (int b = 0; b < ns; ++b) {
      if ((m.sheet_above_[comp[x]] >> b) & 1U) m.r0_[x] |= sheets[b].mask;
    }
  }
  m.sheets_ = std::move(sheets);
  m.val_ = std::move(p.val);
  m.ids_ = std::move(p.ids);
  m.root_ = p.root;
  if (m.cone(m.root_) != m.all()) throw NoRoot("root does not generate every world");
  return m;
}

StratifiedModel StratifiedModel::single(Valuation v) {
  Parts p;
  p.sheet_of = {0};
  p.r1 = {0};
  p.sheet_above = {0};
  p.val = {v};
  return from_parts(std::move(p));
}

std::optional<int> StratifiedModel::index_of_id(int id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<int>(it - ids_.begin());
}

StratifiedModel StratifiedModel::with_valuation(std::vector<Valuation> val) const {
  if (val.size() != val_.size()) throw ModelError("valuation size mismatch");
  StratifiedModel m = *this;
  m.val_ = std::move(val);
  return m;
}

StratifiedModel::Parts StratifiedModel::parts() const {
  Parts p;
  p.sheet_of = sheet_of_;
  p.r1 = r1_;
  p.sheet_above = sheet_above_;
  p.val = val_;
  p.root = root_;
  p.ids = ids_;
  return p;
}

RawModel to_raw(const StratifiedModel& m) {
  RawModel raw;
  raw.worlds = m.ids();
  for (int x = 0; x < m.size(); ++x) {
    for (int y = 0; y < m.size(); ++y) {
      if (m.r0(x, y)) raw.r0.emplace_back(m.id(x), m.id(y));
      if (m.r1(x, y)) raw.r1.emplace_back(m.id(x), m.id(y));
    }
    raw.val[m.id(x)] = m.val(x);
  }
  raw.root = m.id(m.root());
  return raw;
}

StratifiedModel stratify(const RawModel& raw) {
  FrameReport report = validate_frame(raw);
  if (!report.all_ok()) {
    const auto& v = report.violations.front();
    std::string w;
    for (int id : v.witness) w += (w.empty() ? "" : ",") + std::to_string(id);
    throw NotStratified("frame condition " + v.condition + " fails at (" + w + ")");
  }
  if (!raw.root) throw NoRoot("model has no root");
  Indexed ix = index_raw(raw);
  const int n = ix.n;

  StratifiedModel::Parts p;
  p.r1 = ix.r1;
  p.val.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (auto it = raw.val.find(raw.worlds[i]); it != raw.val.end()) p.val[i] = it->second;
  }
  p.root = ix.index.at(*raw.root);
  p.ids = raw.worlds;

  // E1-classes with a provisional numbering.
  p.sheet_of.assign(n, -1);
  int ns = 0;
  for (int w = 0; w < n; ++w) {
    if (p.sheet_of[w] >= 0) continue;
    std::vector<int> stack{w};
    p.sheet_of[w] = ns;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y = 0; y < n; ++y) {
        if (p.sheet_of[y] < 0 && (has(ix.r1[x], y) || has(ix.r1[y], x))) {
          p.sheet_of[y] = ns;
          stack.push_back(y);
        }
      }
    }
    ++ns;
  }
  if (ns > 64) throw ModelError("more than 64 sheets");
  p.sheet_above.assign(ns, 0);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (has(ix.r0[x], y)) p.sheet_above[p.sheet_of[x]] |= std::uint64_t{1} << p.sheet_of[y];
    }
  }
  for (int s = 0; s < ns; ++s) {
    if ((p.sheet_above[s] >> s) & 1U) throw NotStratified("R0 relates two worlds of one 1-sheet");
  }

  StratifiedModel m = StratifiedModel::from_parts(std::move(p));
  for (int x = 0; x < n; ++x) {
    if (m.r0(x) != ix.r0[x]) {
      throw NotStratified("R0 is not determined by the 1-sheet order at world " +
                          std::to_string(raw.worlds[x]));
    }
  }
  return m;
}

}  // namespace j2kit
