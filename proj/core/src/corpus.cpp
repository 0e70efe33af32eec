#include "j2kit/corpus.hpp"

#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>
#include <unordered_set>

#include "j2kit/bisim.hpp"

namespace j2kit {

std::size_t approx_model_bytes(int worlds) {
  return 256 + static_cast<std::size_t>(worlds) * 64;
}

namespace {

struct Pool {
  std::deque<StratifiedModel> models;
  std::vector<std::string> codes;
  std::unordered_set<std::string> seen;
  std::size_t candidates = 0;
  bool truncated = false;
  std::size_t bytes = 0;
  std::size_t byte_budget = 0;

  // Returns false once the candidate bound is hit.
  bool offer(StratifiedModel m, std::size_t max_candidates) {
    if (++candidates > max_candidates) {
      truncated = true;
      return false;
    }
    std::string code = world_codes(m, kFullDepth)[m.root()];
    if (!seen.insert(code).second) return true;
    bytes += approx_model_bytes(m.size()) + code.size();
    if (byte_budget && bytes > byte_budget) throw BoundExhausted("corpus exceeds the memory budget");
    codes.push_back(std::move(code));
    models.push_back(std::move(m));
    return true;
  }
};

// Enumerates sets of pairwise distinct pool entries (strictly increasing
// indices among those generated before `limit`) whose sizes add up to
// `total`.  `extra` is a second additive budget (sheets) checked alongside.
void for_each_set(const std::deque<StratifiedModel>& pool, std::size_t limit, int total,
                  const std::function<int(const StratifiedModel&)>& extra, int extra_budget,
                  const std::function<bool(const std::vector<const StratifiedModel*>&)>& emit) {
  std::vector<const StratifiedModel*> chosen;
  bool stop = false;
  auto rec = [&](auto&& self, std::size_t start, int remaining, int budget) -> void {
    if (stop) return;
    if (remaining == 0) {
      if (!emit(chosen)) stop = true;
      return;
    }
    for (std::size_t i = start; i < limit && !stop; ++i) {
      const StratifiedModel& m = pool[i];
      if (m.size() > remaining) break;  // pool is ordered by size
      int cost = extra(m);
      if (cost > budget) continue;
      chosen.push_back(&m);
      self(self, i + 1, remaining - m.size(), budget - cost);
      chosen.pop_back();
    }
  };
  rec(rec, 0, total, extra_budget);
}

// Root sheet `base` (single-sheet model) with `uppers` placed R0-above it.
StratifiedModel stack(const StratifiedModel& base, const std::vector<const StratifiedModel*>& uppers,
                      bool merge_into_base_sheet) {
  StratifiedModel::Parts p = base.parts();
  const int base_sheets = static_cast<int>(base.sheets().size());
  std::vector<std::uint64_t> above = p.sheet_above;
  std::vector<int> sheet_offsets;
  int next_sheet = base_sheets;
  for (const StratifiedModel* u : uppers) {
    const int world_offset = static_cast<int>(p.val.size());
    StratifiedModel::Parts up = u->parts();
    const int sheet_offset = merge_into_base_sheet ? 0 : next_sheet;
    for (int w = 0; w < u->size(); ++w) {
      p.val.push_back(up.val[w]);
      p.sheet_of.push_back(merge_into_base_sheet ? p.sheet_of[base.root()] : up.sheet_of[w] + sheet_offset);
      p.r1.push_back(up.r1[w] << world_offset);
      p.ids.push_back(static_cast<int>(p.ids.size()));
    }
    if (merge_into_base_sheet) {
      p.r1[base.root()] |= bit(world_offset + u->root()) | (up.r1[u->root()] << world_offset);
    } else {
      for (std::size_t s = 0; s < up.sheet_above.size(); ++s) {
        above.push_back(up.sheet_above[s] << sheet_offset);
        above[base.sheet_of(base.root())] |= std::uint64_t{1} << (sheet_offset + s);
      }
      next_sheet += static_cast<int>(up.sheet_above.size());
    }
  }
  p.sheet_above = std::move(above);
  return StratifiedModel::from_parts(std::move(p));
}

std::shared_ptr<const Corpus> build_gl(std::size_t nvars, int max_worlds, const Bounds& b) {
  Pool pool;
  pool.byte_budget = b.max_memory;
  auto corpus = std::make_shared<Corpus>();
  corpus->nvars = nvars;
  corpus->max_worlds = max_worlds;
  corpus->max_sheets = 1;
  corpus->count_by_size.assign(max_worlds + 1, 0);
  const Valuation nval = Valuation{1} << nvars;
  for (int s = 1; s <= max_worlds && !pool.truncated; ++s) {
    const std::size_t limit = pool.models.size();
    for (Valuation v = 0; v < nval && !pool.truncated; ++v) {
      StratifiedModel root = StratifiedModel::single(v);
      for_each_set(
          pool.models, limit, s - 1, [](const StratifiedModel&) { return 0; }, 0,
          [&](const std::vector<const StratifiedModel*>& kids) {
            return pool.offer(stack(root, kids, true), b.max_candidates);
          });
    }
    corpus->count_by_size[s] = pool.models.size() - limit;
  }
  corpus->models.assign(std::make_move_iterator(pool.models.begin()),
                        std::make_move_iterator(pool.models.end()));
  corpus->codes = std::move(pool.codes);
  corpus->truncated = pool.truncated;
  corpus->bytes = pool.bytes;
  return corpus;
}

std::shared_ptr<const Corpus> build_j2(std::size_t nvars, const Bounds& b) {
  auto trees = gl_corpus(nvars, b.max_worlds, b);
  Pool pool;
  pool.byte_budget = b.max_memory;
  auto corpus = std::make_shared<Corpus>();
  corpus->nvars = nvars;
  corpus->max_worlds = b.max_worlds;
  corpus->max_sheets = b.max_sheets;
  corpus->count_by_size.assign(b.max_worlds + 1, 0);
  auto sheets = [](const StratifiedModel& m) { return static_cast<int>(m.sheets().size()); };
  for (int s = 1; s <= b.max_worlds && !pool.truncated; ++s) {
    const std::size_t limit = pool.models.size();
    for (const StratifiedModel& tree : trees->models) {
      if (tree.size() > s || pool.truncated) continue;
      for_each_set(pool.models, limit, s - tree.size(), sheets, b.max_sheets - 1,
                   [&](const std::vector<const StratifiedModel*>& ups) {
                     return pool.offer(stack(tree, ups, false), b.max_candidates);
                   });
    }
    corpus->count_by_size[s] = pool.models.size() - limit;
  }
  corpus->models.assign(std::make_move_iterator(pool.models.begin()),
                        std::make_move_iterator(pool.models.end()));
  corpus->codes = std::move(pool.codes);
  corpus->truncated = pool.truncated || trees->truncated;
  corpus->bytes = pool.bytes;
  return corpus;
}

std::mutex cache_mutex;
std::map<std::tuple<int, std::size_t, int, int, std::size_t>, std::shared_ptr<const Corpus>> cache;

std::shared_ptr<const Corpus> within_budget(std::shared_ptr<const Corpus> c, const Bounds& b) {
  if (b.max_memory && c->bytes > b.max_memory) throw BoundExhausted("corpus exceeds the memory budget");
  return c;
}

}  // namespace

std::shared_ptr<const Corpus> j2_corpus(std::size_t nvars, const Bounds& b) {
  if (nvars > kMaxVariables) throw std::invalid_argument("too many variables");
  if (b.max_worlds < 1 || b.max_worlds > kMaxWorlds) throw std::invalid_argument("max_worlds out of range");
  if (b.max_sheets < 1) throw std::invalid_argument("max_sheets must be positive");
  std::lock_guard lock(cache_mutex);
  auto key = std::make_tuple(0, nvars, b.max_worlds, b.max_sheets, b.max_candidates);
  if (auto it = cache.find(key); it != cache.end()) return within_budget(it->second, b);
  auto built = build_j2(nvars, b);
  cache.emplace(key, built);
  return built;
}

std::shared_ptr<const Corpus> gl_corpus(std::size_t nvars, int max_worlds, const Bounds& b) {
  if (nvars > kMaxVariables) throw std::invalid_argument("too many variables");
  if (max_worlds < 1 || max_worlds > kMaxWorlds) throw std::invalid_argument("max_worlds out of range");
  static std::recursive_mutex gl_mutex;
  std::lock_guard lock(gl_mutex);
  static std::map<std::tuple<std::size_t, int, std::size_t>, std::shared_ptr<const Corpus>> gl_cache;
  auto key = std::make_tuple(nvars, max_worlds, b.max_candidates);
  if (auto it = gl_cache.find(key); it != gl_cache.end()) return within_budget(it->second, b);
  auto built = build_gl(nvars, max_worlds, b);
  gl_cache.emplace(key, built);
  return built;
}

}  // namespace j2kit
