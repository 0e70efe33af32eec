#include "j2kit/bisim.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <unordered_map>

#include "j2kit/corpus.hpp"

namespace j2kit {

namespace {

constexpr std::size_t kCodeCap = std::size_t{1} << 24;

void put_varint(std::string& s, std::uint64_t v) {
  while (v >= 0x80) {
    s.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  s.push_back(static_cast<char>(v));
}

std::uint64_t get_varint(std::string_view s, std::size_t& pos) {
  std::uint64_t v = 0;
  int shift = 0;
  for (;;) {
    if (pos >= s.size()) throw std::invalid_argument("truncated type code");
    auto byte = static_cast<unsigned char>(s[pos++]);
    v |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
    if (!(byte & 0x80)) return v;
    shift += 7;
  }
}

std::string encode(Valuation val, std::vector<const std::string*>& s0,
                   std::vector<const std::string*>& s1) {
  auto norm = [](std::vector<const std::string*>& v) {
    std::sort(v.begin(), v.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
    v.erase(std::unique(v.begin(), v.end(),
                        [](const std::string* a, const std::string* b) { return *a == *b; }),
            v.end());
  };
  norm(s0);
  norm(s1);
  std::string out;
  put_varint(out, val);
  for (auto* list : {&s0, &s1}) {
    put_varint(out, list->size());
    for (const std::string* c : *list) out += *c;
  }
  if (out.size() > kCodeCap) throw BoundExhausted("type code exceeds size cap");
  return out;
}

std::string code_at(const StratifiedModel& m, int w, const std::vector<std::string>& prev) {
  std::vector<const std::string*> s0, s1;
  for (int y = 0; y < m.size(); ++y) {
    if (m.r0(w, y)) s0.push_back(&prev[y]);
    if (m.r1(w, y)) s1.push_back(&prev[y]);
  }
  return encode(m.val(w), s0, s1);
}

// Skips one code of the given depth starting at pos.
void skip_code(std::string_view s, std::size_t& pos, int k) {
  get_varint(s, pos);
  if (k == 0) return;
  for (int list = 0; list < 2; ++list) {
    std::uint64_t count = get_varint(s, pos);
    for (std::uint64_t i = 0; i < count; ++i) skip_code(s, pos, k < 0 ? k : k - 1);
  }
}

}  // namespace

std::vector<std::string> world_codes(const StratifiedModel& m, int n) {
  const int size = m.size();
  std::vector<std::string> codes(size);
  if (n == kFullDepth) {
    // Successor cones strictly shrink along edges.
    std::vector<int> order(size);
    for (int w = 0; w < size; ++w) order[w] = w;
    std::stable_sort(order.begin(), order.end(), [&m](int a, int b) {
      return std::popcount(m.cone(a)) < std::popcount(m.cone(b));
    });
    for (int w : order) codes[w] = code_at(m, w, codes);
    return codes;
  }
  for (int w = 0; w < size; ++w) {
    codes[w].clear();
    put_varint(codes[w], m.val(w));
  }
  for (int k = 1; k <= n; ++k) {
    std::vector<std::string> next(size);
    for (int w = 0; w < size; ++w) next[w] = code_at(m, w, codes);
    codes = std::move(next);
  }
  return codes;
}

std::string point_code(const PointedModel& w, int n) {
  return world_codes(w.model, n).at(w.point);
}

std::string to_hex(const std::string& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

bool nbisimilar(const PointedModel& a, const PointedModel& b, int n) {
  const StratifiedModel& ma = a.model;
  const StratifiedModel& mb = b.model;
  if (n == kFullDepth) n = ma.size() + mb.size();
  const int na = ma.size(), nb = mb.size();
  std::vector<std::int8_t> memo(static_cast<std::size_t>(na) * nb * (n + 1), -1);
  auto rec = [&](auto&& self, int x, int y, int k) -> bool {
    std::int8_t& slot = memo[(static_cast<std::size_t>(k) * na + x) * nb + y];
    if (slot >= 0) return slot;
    bool ok = ma.val(x) == mb.val(y);
    for (int i = 0; ok && k > 0 && i < 2; ++i) {
      const WorldSet sx = ma.succ(i, x), sy = mb.succ(i, y);
      for (int x2 = 0; ok && x2 < na; ++x2) {
        if (!has(sx, x2)) continue;
        bool found = false;
        for (int y2 = 0; !found && y2 < nb; ++y2) found = has(sy, y2) && self(self, x2, y2, k - 1);
        ok = found;
      }
      for (int y2 = 0; ok && y2 < nb; ++y2) {
        if (!has(sy, y2)) continue;
        bool found = false;
        for (int x2 = 0; !found && x2 < na; ++x2) found = has(sx, x2) && self(self, x2, y2, k - 1);
        ok = found;
      }
    }
    slot = ok ? 1 : 0;
    return ok;
  };
  return rec(rec, a.point, b.point, n);
}

Formula char_formula_of_code(const std::string& code, int n, std::size_t nvars) {
  if (n < 0) throw std::invalid_argument("characteristic formulas need a finite depth");
  std::vector<std::unordered_map<std::string, Formula>> memo(n + 1);
  auto build = [&](auto&& self, std::string_view c, int k) -> Formula {
    auto& table = memo[k];
    std::string key(c);
    if (auto it = table.find(key); it != table.end()) return it->second;
    std::size_t pos = 0;
    const auto val = static_cast<Valuation>(get_varint(c, pos));
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < nvars; ++i) {
      Formula p = Formula::var(i);
      parts.push_back((val >> i) & 1U ? p : Formula::neg(p));
    }
    if (k > 0) {
      for (int mod = 0; mod < 2; ++mod) {
        std::uint64_t count = get_varint(c, pos);
        std::vector<Formula> succ;
        for (std::uint64_t j = 0; j < count; ++j) {
          std::size_t start = pos;
          skip_code(c, pos, k - 1);
          succ.push_back(self(self, c.substr(start, pos - start), k - 1));
        }
        for (Formula s : succ) parts.push_back(Formula::diamond(mod, s));
        parts.push_back(Formula::box(mod, Formula::disj_all(succ)));
      }
    }
    Formula f = parts.empty() ? Formula::top() : Formula::conj_all(parts);
    table.emplace(std::move(key), f);
    return f;
  };
  return build(build, code, n);
}

Formula char_formula(const PointedModel& w, int n, std::size_t nvars) {
  return char_formula_of_code(point_code(w, n), n, nvars);
}

NType type_of(const PointedModel& w, int n) {
  PointedModel g = generated_submodel(w.model, w.point);
  const StratifiedModel& m = g.model;
  const std::string target = world_codes(m, n)[m.root()];
  WorldSet keep = m.all();
  for (int x = m.size() - 1; x >= 0; --x) {
    if (x == m.root()) continue;
    StratifiedModel sub = induced_submodel(m, keep & ~bit(x), m.root());
    if (world_codes(sub, n)[sub.root()] == target) keep &= ~bit(x);
  }
  StratifiedModel rep = canonicalize(induced_submodel(m, keep, m.root()));
  return NType{n, PointedModel{rep, rep.root()}, target};
}

int TypeUniverse::index_of(const std::string& code) const {
  auto it = std::lower_bound(types.begin(), types.end(), code,
                             [](const NType& t, const std::string& c) { return t.code < c; });
  if (it == types.end() || it->code != code) return -1;
  return static_cast<int>(it - types.begin());
}

namespace {

// Depth <= 1 types are exactly the triples (valuation, valuations seen along
// R0, valuations seen along R1); each is realized by a root with one R1 leaf
// per R1 valuation and one single-world sheet above per R0 valuation.
std::optional<TypeUniverse> small_depth_universe(std::size_t nvars, int n) {
  const std::size_t nval = std::size_t{1} << nvars;
  if (n > 1 || nvars > 2) return std::nullopt;
  TypeUniverse u;
  u.n = n;
  u.nvars = nvars;
  const std::size_t nsets = n == 0 ? 1 : std::size_t{1} << nval;
  for (Valuation v = 0; v < nval; ++v) {
    for (std::size_t a = 0; a < nsets; ++a) {
      for (std::size_t r = 0; r < nsets; ++r) {
        StratifiedModel::Parts p;
        p.sheet_of = {0};
        p.r1 = {0};
        p.val = {v};
        p.sheet_above = {0};
        for (Valuation x = 0; x < nval; ++x) {
          if (!((r >> x) & 1U)) continue;
          p.r1[0] |= bit(static_cast<int>(p.val.size()));
          p.sheet_of.push_back(0);
          p.r1.push_back(0);
          p.val.push_back(x);
        }
        for (Valuation x = 0; x < nval; ++x) {
          if (!((a >> x) & 1U)) continue;
          p.sheet_above[0] |= std::uint64_t{1} << p.sheet_above.size();
          p.sheet_of.push_back(static_cast<int>(p.sheet_above.size()));
          p.sheet_above.push_back(0);
          p.r1.push_back(0);
          p.val.push_back(x);
        }
        u.types.push_back(type_of(PointedModel{StratifiedModel::from_parts(std::move(p)), 0}, n));
      }
    }
  }
  std::sort(u.types.begin(), u.types.end(),
            [](const NType& x, const NType& y) { return x.code < y.code; });
  int worlds = 1;
  for (const NType& t : u.types) worlds = std::max(worlds, t.rep.model.size());
  u.bound_worlds = worlds;
  return u;
}

}  // namespace

TypeUniverse enumerate_types(std::size_t nvars, int n, const Bounds& b) {
  if (auto u = small_depth_universe(nvars, n)) return *std::move(u);
  auto corpus = j2_corpus(nvars, b);
  TypeUniverse u;
  u.n = n;
  u.nvars = nvars;
  u.bound_worlds = corpus->max_worlds;
  std::unordered_map<std::string, std::size_t> seen;
  bool grew_at_max = false;
  for (const StratifiedModel& m : corpus->models) {
    std::vector<std::string> codes = world_codes(m, n);
    for (int w = 0; w < m.size(); ++w) {
      if (seen.contains(codes[w])) continue;
      seen.emplace(codes[w], u.types.size());
      u.types.push_back(type_of(PointedModel{m, w}, n));
      if (m.size() == corpus->max_worlds) grew_at_max = true;
    }
  }
  if (u.types.empty()) throw BoundExhausted("no types within the generation bounds");
  std::sort(u.types.begin(), u.types.end(),
            [](const NType& x, const NType& y) { return x.code < y.code; });
  u.truncated = grew_at_max || corpus->truncated;
  return u;
}

Formula class_to_formula(std::span<const NType> types, int n, std::size_t nvars) {
  std::vector<const NType*> sorted;
  for (const NType& t : types) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [](const NType* a, const NType* b) { return a->code < b->code; });
  std::vector<Formula> parts;
  for (const NType* t : sorted) parts.push_back(char_formula_of_code(t->code, n, nvars));
  return Formula::disj_all(parts);
}

}  // namespace j2kit
