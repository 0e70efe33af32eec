#include "j2kit/formula.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace j2kit {

// ---------------------------------------------------------------------------
// VarContext
// ---------------------------------------------------------------------------

VarContext::VarContext(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxVariables) {
    throw std::invalid_argument("variable context larger than " + std::to_string(kMaxVariables));
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw std::invalid_argument("empty variable name");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate variable name '" + n + "'");
  }
}

VarContext VarContext::standard(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) names.push_back("p" + std::to_string(i));
  return VarContext(std::move(names));
}

std::optional<std::size_t> VarContext::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Node table
// ---------------------------------------------------------------------------

namespace {

struct NodeKey {
  Kind kind;
  std::uint8_t modality;
  std::uint16_t var;
  const detail::Node* lhs;
  const detail::Node* rhs;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.kind) * 0x9e3779b97f4a7c15ULL;
    h ^= (static_cast<std::size_t>(k.modality) << 8 | k.var) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<const void*>{}(k.lhs) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<const void*>{}(k.rhs) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};

class NodeTable {
 public:
  const detail::Node* intern(const NodeKey& key) {
    std::lock_guard lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    std::uint32_t d = 0;
    if (key.kind == Kind::Box) {
      d = key.lhs->depth + 1;
    } else if (key.lhs != nullptr) {
      d = key.lhs->depth;
      if (key.rhs != nullptr) d = std::max(d, key.rhs->depth);
    }
    nodes_.push_back(detail::Node{key.kind, key.modality, key.var, d,
                                  static_cast<std::uint32_t>(nodes_.size()), key.lhs, key.rhs});
    const detail::Node* n = &nodes_.back();
    index_.emplace(key, n);
    return n;
  }

 private:
  std::mutex mu_;
  std::deque<detail::Node> nodes_;
  std::unordered_map<NodeKey, const detail::Node*, NodeKeyHash> index_;
};

NodeTable& table() {
  static NodeTable t;
  return t;
}

}  // namespace

Formula Formula::make(Kind k, std::uint8_t mod, std::uint16_t var, const detail::Node* a,
                      const detail::Node* b) {
  return Formula(table().intern(NodeKey{k, mod, var, a, b}));
}

Formula::Formula() : node_(top().node_) {}

Formula Formula::var(std::size_t index) {
  if (index >= kMaxVariables) throw std::out_of_range("variable index out of range");
  return make(Kind::Var, 0, static_cast<std::uint16_t>(index), nullptr, nullptr);
}
Formula Formula::top() {
  static const detail::Node* n = table().intern(NodeKey{Kind::Top, 0, 0, nullptr, nullptr});
  return Formula(n);
}
Formula Formula::bot() { return make(Kind::Bot, 0, 0, nullptr, nullptr); }
Formula Formula::neg(Formula a) { return make(Kind::Not, 0, 0, a.node_, nullptr); }
Formula Formula::conj(Formula a, Formula b) { return make(Kind::And, 0, 0, a.node_, b.node_); }
Formula Formula::disj(Formula a, Formula b) { return make(Kind::Or, 0, 0, a.node_, b.node_); }
Formula Formula::implies(Formula a, Formula b) {
  return make(Kind::Implies, 0, 0, a.node_, b.node_);
}
Formula Formula::box(int modality, Formula a) {
  if (modality != 0 && modality != 1) throw std::invalid_argument("modality must be 0 or 1");
  return make(Kind::Box, static_cast<std::uint8_t>(modality), 0, a.node_, nullptr);
}
Formula Formula::diamond(int modality, Formula a) { return neg(box(modality, neg(a))); }
Formula Formula::iff(Formula a, Formula b) { return conj(implies(a, b), implies(b, a)); }

Formula Formula::conj_all(std::span<const Formula> parts) {
  if (parts.empty()) return top();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}

Formula Formula::disj_all(std::span<const Formula> parts) {
  if (parts.empty()) return bot();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}

namespace {

template <typename Visit>
void for_each_node(const detail::Node* root, Visit&& visit) {
  std::unordered_set<const detail::Node*> seen;
  std::vector<const detail::Node*> stack{root};
  while (!stack.empty()) {
    const detail::Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    visit(n);
    if (n->lhs) stack.push_back(n->lhs);
    if (n->rhs) stack.push_back(n->rhs);
  }
}

}  // namespace

std::size_t Formula::variable_bound() const {
  std::size_t bound = 0;
  for_each_node(node_, [&](const detail::Node* n) {
    if (n->kind == Kind::Var) bound = std::max<std::size_t>(bound, n->var + 1);
  });
  return bound;
}

bool Formula::free_of_modality(int modality) const {
  bool found = false;
  for_each_node(node_, [&](const detail::Node* n) {
    if (n->kind == Kind::Box && n->modality == modality) found = true;
  });
  return !found;
}

std::size_t Formula::dag_size() const {
  std::size_t count = 0;
  for_each_node(node_, [&](const detail::Node*) { ++count; });
  return count;
}

std::size_t Formula::tree_size(std::size_t cap) const {
  std::unordered_map<const detail::Node*, std::size_t> memo;
  auto sat_add = [cap](std::size_t a, std::size_t b) { return (a > cap - b) ? cap : a + b; };
  std::function<std::size_t(const detail::Node*)> go = [&](const detail::Node* n) -> std::size_t {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::size_t s = 1;
    if (n->lhs) s = sat_add(s, go(n->lhs));
    if (n->rhs) s = sat_add(s, go(n->rhs));
    s = std::min(s, cap);
    memo.emplace(n, s);
    return s;
  };
  return go(node_);
}

int structural_compare(Formula a, Formula b) {
  std::map<std::pair<const detail::Node*, const detail::Node*>, int> memo;
  std::function<int(const detail::Node*, const detail::Node*)> cmp =
      [&](const detail::Node* x, const detail::Node* y) -> int {
    if (x == y) return 0;
    if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
    if (x->modality != y->modality) return x->modality < y->modality ? -1 : 1;
    if (x->var != y->var) return x->var < y->var ? -1 : 1;
    auto key = std::make_pair(x, y);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int r = 0;
    if (x->lhs) r = cmp(x->lhs, y->lhs);
    if (r == 0 && x->rhs) r = cmp(x->rhs, y->rhs);
    memo.emplace(key, r);
    return r;
  };
  return cmp(a.node(), b.node());
}

}  // namespace j2kit
