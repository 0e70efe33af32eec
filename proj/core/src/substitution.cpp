#include <unordered_map>

#include "j2kit/formula.hpp"

namespace j2kit {

Substitution::Substitution(std::vector<Formula> images) : images_(std::move(images)) {}

Substitution Substitution::identity(std::size_t n) {
  std::vector<Formula> images;
  images.reserve(n);
  for (std::size_t i = 0; i < n; ++i) images.push_back(Formula::var(i));
  return Substitution(std::move(images));
}

namespace {

// Memoized on node identity so shared subterms are rewritten once.
class Rewriter {
 public:
  explicit Rewriter(const Substitution& s) : s_(s) {}

  Formula operator()(Formula f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    Formula r;
    switch (f.kind()) {
      case Kind::Var:
        if (f.var_index() >= s_.size()) {
          throw std::out_of_range("substitution does not cover variable index " +
                                  std::to_string(f.var_index()));
        }
        r = s_[f.var_index()];
        break;
      case Kind::Top:
      case Kind::Bot: r = f; break;
      case Kind::Not: r = Formula::neg((*this)(f.lhs())); break;
      case Kind::Box: r = Formula::box(f.modality(), (*this)(f.lhs())); break;
      case Kind::And: r = Formula::conj((*this)(f.lhs()), (*this)(f.rhs())); break;
      case Kind::Or: r = Formula::disj((*this)(f.lhs()), (*this)(f.rhs())); break;
      case Kind::Implies: r = Formula::implies((*this)(f.lhs()), (*this)(f.rhs())); break;
    }
    memo_.emplace(f, r);
    return r;
  }

 private:
  const Substitution& s_;
  std::unordered_map<Formula, Formula, FormulaHash> memo_;
};

// Rebuilds bottom-up, replacing any node found in the table.
class Replacer {
 public:
  explicit Replacer(const std::unordered_map<Formula, Formula, FormulaHash>& table) : table_(table) {}

  Formula operator()(Formula f) {
    if (auto it = table_.find(f); it != table_.end()) return it->second;
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    Formula r = f;
    switch (f.kind()) {
      case Kind::Var:
      case Kind::Top:
      case Kind::Bot: break;
      case Kind::Not: r = Formula::neg((*this)(f.lhs())); break;
      case Kind::Box: r = Formula::box(f.modality(), (*this)(f.lhs())); break;
      case Kind::And: r = Formula::conj((*this)(f.lhs()), (*this)(f.rhs())); break;
      case Kind::Or: r = Formula::disj((*this)(f.lhs()), (*this)(f.rhs())); break;
      case Kind::Implies: r = Formula::implies((*this)(f.lhs()), (*this)(f.rhs())); break;
    }
    memo_.emplace(f, r);
    return r;
  }

 private:
  const std::unordered_map<Formula, Formula, FormulaHash>& table_;
  std::unordered_map<Formula, Formula, FormulaHash> memo_;
};

}  // namespace

Formula replace_subformulas(Formula f, const std::unordered_map<Formula, Formula, FormulaHash>& table) {
  return Replacer(table)(f);
}

Formula apply_subst(const Substitution& s, Formula f) { return Rewriter(s)(f); }

Substitution compose(const Substitution& t, const Substitution& s) {
  if (t.size() != s.size()) throw std::invalid_argument("compose: substitutions over different contexts");
  Rewriter rw(t);
  std::vector<Formula> images;
  images.reserve(s.size());
  for (Formula img : s.images()) images.push_back(rw(img));
  return Substitution(std::move(images));
}

}  // namespace j2kit
