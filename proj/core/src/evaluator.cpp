#include "j2kit/evaluator.hpp"

#include <unordered_map>

namespace j2kit {

CompiledFormulas::CompiledFormulas(std::span<const Formula> roots) {
  std::unordered_map<const detail::Node*, std::uint32_t> slot;
  // Iterative post-order so deeply nested images do not exhaust the stack.
  std::vector<std::pair<const detail::Node*, bool>> stack;
  for (Formula r : roots) {
    stack.emplace_back(r.node(), false);
    while (!stack.empty()) {
      auto [n, expanded] = stack.back();
      stack.pop_back();
      if (slot.contains(n)) continue;
      if (!expanded) {
        stack.emplace_back(n, true);
        if (n->rhs && !slot.contains(n->rhs)) stack.emplace_back(n->rhs, false);
        if (n->lhs && !slot.contains(n->lhs)) stack.emplace_back(n->lhs, false);
        continue;
      }
      Op op{n->kind, n->modality, n->var, 0, 0};
      if (n->lhs) op.a = slot.at(n->lhs);
      if (n->rhs) op.b = slot.at(n->rhs);
      slot.emplace(n, static_cast<std::uint32_t>(ops_.size()));
      ops_.push_back(op);
    }
    roots_.push_back(slot.at(r.node()));
  }
}

void CompiledFormulas::run(const StratifiedModel& m, std::vector<WorldSet>& t) const {
  t.resize(ops_.size());
  const WorldSet all = m.all();
  const int n = m.size();
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Op& op = ops_[i];
    switch (op.kind) {
      case Kind::Var: {
        WorldSet s = 0;
        for (int w = 0; w < n; ++w) {
          if ((m.val(w) >> op.var) & 1U) s |= bit(w);
        }
        t[i] = s;
        break;
      }
      case Kind::Top: t[i] = all; break;
      case Kind::Bot: t[i] = 0; break;
      case Kind::Not: t[i] = all & ~t[op.a]; break;
      case Kind::And: t[i] = t[op.a] & t[op.b]; break;
      case Kind::Or: t[i] = t[op.a] | t[op.b]; break;
      case Kind::Implies: t[i] = (all & ~t[op.a]) | t[op.b]; break;
      case Kind::Box: {
        const WorldSet inner = t[op.a];
        WorldSet s = 0;
        for (int w = 0; w < n; ++w) {
          if ((m.succ(op.modality, w) & ~inner) == 0) s |= bit(w);
        }
        t[i] = s;
        break;
      }
    }
  }
}

void CompiledFormulas::evaluate(const StratifiedModel& m, std::vector<WorldSet>& scratch,
                                std::vector<WorldSet>& out) const {
  run(m, scratch);
  out.resize(roots_.size());
  for (std::size_t i = 0; i < roots_.size(); ++i) out[i] = scratch[roots_[i]];
}

std::vector<WorldSet> CompiledFormulas::evaluate(const StratifiedModel& m) const {
  std::vector<WorldSet> scratch, out;
  evaluate(m, scratch, out);
  return out;
}

WorldSet CompiledFormulas::evaluate_first(const StratifiedModel& m,
                                          std::vector<WorldSet>& scratch) const {
  run(m, scratch);
  return scratch[roots_.front()];
}

}  // namespace j2kit
