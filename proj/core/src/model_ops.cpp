#include <algorithm>
#include <bit>
#include <map>

#include "j2kit/evaluator.hpp"
#include "j2kit/model.hpp"

namespace j2kit {

WorldSet truth_set(const StratifiedModel& m, Formula f) {
  std::vector<WorldSet> scratch;
  return CompiledFormulas(f).evaluate_first(m, scratch);
}

bool force(const StratifiedModel& m, int world, Formula f) {
  if (world < 0 || world >= m.size()) throw ModelError("unknown world " + std::to_string(world));
  return has(truth_set(m, f), world);
}

bool globally_true(const StratifiedModel& m, Formula f) { return truth_set(m, f) == m.all(); }

StratifiedModel induced_submodel(const StratifiedModel& m, WorldSet keep, int new_root) {
  if (!has(keep, new_root)) throw ModelError("induced_submodel: root not kept");
  std::vector<int> remap(m.size(), -1);
  StratifiedModel::Parts src = m.parts();
  StratifiedModel::Parts p;
  for (int w = 0; w < m.size(); ++w) {
    if (!has(keep, w)) continue;
    remap[w] = static_cast<int>(p.val.size());
    p.val.push_back(src.val[w]);
    p.sheet_of.push_back(src.sheet_of[w]);
    p.ids.push_back(src.ids[w]);
  }
  p.r1.assign(p.val.size(), 0);
  for (int w = 0; w < m.size(); ++w) {
    if (remap[w] < 0) continue;
    for (int y = 0; y < m.size(); ++y) {
      if (remap[y] >= 0 && m.r1(w, y)) p.r1[remap[w]] |= bit(remap[y]);
    }
  }
  p.sheet_above = src.sheet_above;
  p.root = remap[new_root];
  return StratifiedModel::from_parts(std::move(p));
}

PointedModel generated_submodel(const StratifiedModel& m, int x) {
  if (x < 0 || x >= m.size()) throw ModelError("unknown world " + std::to_string(x));
  StratifiedModel sub = induced_submodel(m, m.cone(x), x);
  return PointedModel{sub, sub.root()};
}

StratifiedModel variant(const StratifiedModel& m, Valuation root_val) {
  std::vector<Valuation> val = m.valuation();
  val[m.root()] = root_val;
  return m.with_valuation(std::move(val));
}

StratifiedModel apply_subst_model(const Substitution& s, const StratifiedModel& m) {
  CompiledFormulas images(s.images());
  std::vector<WorldSet> truth = images.evaluate(m);
  std::vector<Valuation> val(m.size(), 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (int w = 0; w < m.size(); ++w) {
      if (has(truth[i], w)) val[w] |= Valuation{1} << i;
    }
  }
  return m.with_valuation(std::move(val));
}

// ---------------------------------------------------------------------------
// Canonical labeling by colour refinement plus individualization.
// ---------------------------------------------------------------------------

namespace {

class Canonizer {
 public:
  Canonizer(const StratifiedModel& m, WorldSet subset, int root)
      : m_(m), subset_(subset), root_(root) {
    for (int w = 0; w < m.size(); ++w) {
      if (has(subset, w)) worlds_.push_back(w);
    }
  }

  CanonicalForm run() {
    std::vector<int> colour(m_.size(), -1);
    std::vector<std::pair<std::vector<long long>, int>> init;
    for (int w : worlds_) {
      init.push_back({{w == root_ ? 0 : 1, static_cast<long long>(m_.val(w))}, w});
    }
    assign(init, colour);
    refine(colour);
    search(colour);
    return best_;
  }

 private:
  // New colours are ranks of signatures, so they do not depend on numbering.
  void assign(std::vector<std::pair<std::vector<long long>, int>>& sigs, std::vector<int>& colour) {
    std::sort(sigs.begin(), sigs.end());
    int c = -1;
    const std::vector<long long>* prev = nullptr;
    for (auto& [sig, w] : sigs) {
      if (!prev || *prev != sig) ++c;
      colour[w] = c;
      prev = &sig;
    }
  }

  int count_colours(const std::vector<int>& colour) const {
    int mx = -1;
    for (int w : worlds_) mx = std::max(mx, colour[w]);
    return mx + 1;
  }

  void refine(std::vector<int>& colour) {
    for (;;) {
      int before = count_colours(colour);
      std::vector<std::pair<std::vector<long long>, int>> sigs;
      for (int w : worlds_) {
        std::vector<long long> sig{colour[w]};
        for (int rel = 0; rel < 4; ++rel) {
          std::vector<long long> part;
          for (int y : worlds_) {
            bool e = false;
            switch (rel) {
              case 0: e = m_.r0(w, y); break;
              case 1: e = m_.r0(y, w); break;
              case 2: e = m_.r1(w, y); break;
              case 3: e = m_.r1(y, w); break;
            }
            if (e) part.push_back(colour[y]);
          }
          std::sort(part.begin(), part.end());
          sig.push_back(-1 - rel);
          sig.insert(sig.end(), part.begin(), part.end());
        }
        sigs.push_back({std::move(sig), w});
      }
      assign(sigs, colour);
      if (count_colours(colour) == before) return;
    }
  }

  std::string encode(const std::vector<int>& order) const {
    std::vector<int> pos(m_.size(), -1);
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k);
    std::string code;
    auto put = [&code](std::uint64_t v, int bytes) {
      for (int i = bytes - 1; i >= 0; --i) code.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    put(order.size(), 1);
    put(root_ >= 0 ? static_cast<std::uint64_t>(pos[root_]) : 0xff, 1);
    for (int w : order) {
      put(m_.val(w), 4);
      std::uint64_t r0 = 0, r1 = 0;
      for (int y : worlds_) {
        if (m_.r0(w, y)) r0 |= std::uint64_t{1} << pos[y];
        if (m_.r1(w, y)) r1 |= std::uint64_t{1} << pos[y];
      }
      put(r0, 8);
      put(r1, 8);
    }
    return code;
  }

  void search(std::vector<int> colour) {
    const int k = count_colours(colour);
    if (k == static_cast<int>(worlds_.size())) {
      std::vector<int> order(worlds_.size());
      for (int w : worlds_) order[colour[w]] = w;
      std::string code = encode(order);
      if (!found_ || code < best_.code) {
        best_ = CanonicalForm{std::move(order), std::move(code)};
        found_ = true;
      }
      return;
    }
    // First non-singleton cell by colour.
    std::vector<int> size(k, 0);
    for (int w : worlds_) ++size[colour[w]];
    int cell = 0;
    while (size[cell] < 2) ++cell;
    for (int w : worlds_) {
      if (colour[w] != cell) continue;
      std::vector<int> c = colour;
      std::vector<std::pair<std::vector<long long>, int>> sigs;
      for (int y : worlds_) sigs.push_back({{c[y], y == w ? 0 : 1}, y});
      assign(sigs, c);
      refine(c);
      search(std::move(c));
    }
  }

  const StratifiedModel& m_;
  WorldSet subset_;
  int root_;
  std::vector<int> worlds_;
  CanonicalForm best_;
  bool found_ = false;
};

}  // namespace

CanonicalForm canonical_form(const StratifiedModel& m) {
  return Canonizer(m, m.all(), m.root()).run();
}

StratifiedModel canonicalize(const StratifiedModel& m) {
  CanonicalForm cf = canonical_form(m);
  std::vector<int> pos(m.size());
  for (int k = 0; k < m.size(); ++k) pos[cf.order[k]] = k;
  StratifiedModel::Parts src = m.parts();
  StratifiedModel::Parts p;
  p.val.resize(m.size());
  p.sheet_of.resize(m.size());
  p.r1.assign(m.size(), 0);
  for (int w = 0; w < m.size(); ++w) {
    p.val[pos[w]] = src.val[w];
    p.sheet_of[pos[w]] = src.sheet_of[w];
    for (int y = 0; y < m.size(); ++y) {
      if (m.r1(w, y)) p.r1[pos[w]] |= bit(pos[y]);
    }
  }
  p.sheet_above = src.sheet_above;
  p.root = pos[m.root()];
  return StratifiedModel::from_parts(std::move(p));
}

std::string residue_code(const StratifiedModel& m) {
  WorldSet residue = m.all() & ~m.sheets()[m.root_sheet()].mask;
  if (residue == 0) return {};
  return Canonizer(m, residue, -1).run().code;
}

bool one_congruent(const StratifiedModel& a, const StratifiedModel& b) {
  return residue_code(a) == residue_code(b);
}

StratifiedModel one_sum(const std::vector<StratifiedModel>& ms) {
  if (ms.empty()) throw NotOneCongruent("one_sum of an empty family");
  const std::string code = residue_code(ms.front());
  for (std::size_t i = 1; i < ms.size(); ++i) {
    if (residue_code(ms[i]) != code) {
      throw NotOneCongruent("summand " + std::to_string(i) + " is not 1-congruent to summand 0");
    }
  }
  const StratifiedModel& base = ms.front();
  StratifiedModel::Parts p;
  // Provisional sheet 0 is the merged bottom sheet; base sheet s becomes s + 1.
  p.val.push_back(0);
  p.sheet_of.push_back(0);
  p.r1.push_back(0);
  for (const StratifiedModel& m : ms) {
    const Sheet& rs = m.sheets()[m.root_sheet()];
    const int offset = static_cast<int>(p.val.size());
    std::vector<int> local(m.size(), -1);
    for (std::size_t k = 0; k < rs.worlds.size(); ++k) local[rs.worlds[k]] = offset + static_cast<int>(k);
    for (int w : rs.worlds) {
      p.val.push_back(m.val(w));
      p.sheet_of.push_back(0);
      WorldSet r = 0;
      for (int y : rs.worlds) {
        if (m.r1(w, y)) r |= bit(local[y]);
      }
      p.r1.push_back(r);
      p.r1[0] |= bit(local[w]);
    }
  }
  const int nbase_sheets = static_cast<int>(base.sheets().size());
  std::vector<int> local(base.size(), -1);
  for (int w = 0; w < base.size(); ++w) {
    if (base.sheet_of(w) == base.root_sheet()) continue;
    local[w] = static_cast<int>(p.val.size());
    p.val.push_back(base.val(w));
    p.sheet_of.push_back(base.sheet_of(w) + 1);
    p.r1.push_back(0);
  }
  for (int w = 0; w < base.size(); ++w) {
    if (local[w] < 0) continue;
    for (int y = 0; y < base.size(); ++y) {
      if (base.r1(w, y)) p.r1[local[w]] |= bit(local[y]);
    }
  }
  if (p.val.size() > static_cast<std::size_t>(kMaxWorlds)) throw ModelError("1-sum exceeds 64 worlds");
  p.sheet_above.assign(nbase_sheets + 1, 0);
  for (int s = 0; s < nbase_sheets; ++s) {
    if (s == base.root_sheet()) continue;
    p.sheet_above[0] |= std::uint64_t{1} << (s + 1);
    p.sheet_above[s + 1] = base.sheet_above(s) << 1;
  }
  p.root = 0;
  return StratifiedModel::from_parts(std::move(p));
}

}  // namespace j2kit
