// j2kit/formula.hpp
//
// Bimodal formulas over a fixed, finite variable context.
//
// Formulas are hash-consed: every structurally distinct node exists once in a
// process-wide table, so structural equality is handle equality and large
// substitution images stay shared as DAGs.  Handles are trivially copyable and
// immutable; the table is append-only and guarded by a mutex, which makes
// construction thread-safe.
//
// The AST has no diamond node.  <i>A is built as ~[i]~A.

#ifndef J2KIT_FORMULA_HPP
#define J2KIT_FORMULA_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace j2kit {

/// Bitmask of true variables; bit i is variable i of the context.
using Valuation = std::uint32_t;

inline constexpr std::size_t kMaxVariables = 24;

/// The ordered list of propositional variables every formula is built over.
class VarContext {
 public:
  VarContext() = default;
  explicit VarContext(std::vector<std::string> names);

  /// p1..pn.
  static VarContext standard(std::size_t n);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Number of valuations, 2^size().
  std::size_t valuation_count() const noexcept { return std::size_t{1} << names_.size(); }

  friend bool operator==(const VarContext&, const VarContext&) = default;

 private:
  std::vector<std::string> names_;
};

enum class Kind : std::uint8_t { Var, Top, Bot, Not, And, Or, Implies, Box };

namespace detail {
struct Node {
  Kind kind;
  std::uint8_t modality;  // Box only
  std::uint16_t var;      // Var only
  std::uint32_t depth;
  std::uint32_t id;       // insertion index; process-local, never used for ordering output
  const Node* lhs;
  const Node* rhs;
};
}  // namespace detail

class Formula {
 public:
  /// Defaults to T.
  Formula();

  static Formula var(std::size_t index);
  static Formula top();
  static Formula bot();
  static Formula neg(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula box(int modality, Formula a);

  /// ~[i]~a
  static Formula diamond(int modality, Formula a);
  /// (a -> b) & (b -> a)
  static Formula iff(Formula a, Formula b);
  /// Left-folded conjunction; T when empty.
  static Formula conj_all(std::span<const Formula> parts);
  /// Left-folded disjunction; F when empty.
  static Formula disj_all(std::span<const Formula> parts);

  Kind kind() const noexcept { return node_->kind; }
  std::size_t var_index() const noexcept { return node_->var; }
  int modality() const noexcept { return node_->modality; }
  /// Only child of Not/Box, left child of binary nodes.
  Formula lhs() const noexcept { return Formula(node_->lhs); }
  Formula rhs() const noexcept { return Formula(node_->rhs); }
  std::size_t depth() const noexcept { return node_->depth; }

  bool is_binary() const noexcept {
    return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Implies;
  }
  bool is_unary() const noexcept { return kind() == Kind::Not || kind() == Kind::Box; }

  /// Largest variable index mentioned plus one (0 for variable-free formulas).
  std::size_t variable_bound() const;
  bool is_variable_free() const { return variable_bound() == 0; }
  /// True when no [m] occurs for the given m.
  bool free_of_modality(int modality) const;

  /// Number of distinct DAG nodes.
  std::size_t dag_size() const;
  /// Size of the formula as a tree, saturating at `cap`.
  std::size_t tree_size(std::size_t cap = SIZE_MAX) const;

  const detail::Node* node() const noexcept { return node_; }

  friend bool operator==(Formula a, Formula b) noexcept { return a.node_ == b.node_; }

 private:
  explicit Formula(const detail::Node* n) : node_(n) {}
  static Formula make(Kind k, std::uint8_t mod, std::uint16_t var, const detail::Node* a,
                      const detail::Node* b);

  const detail::Node* node_;
};

/// Total structural order (not insertion order); used wherever output order matters.
int structural_compare(Formula a, Formula b);

struct FormulaHash {
  std::size_t operator()(Formula f) const noexcept {
    return std::hash<const void*>{}(f.node());
  }
};

// ---------------------------------------------------------------------------
// Text front end.  Grammar (ASCII):
//   formula := impl
//   impl    := or ("->" impl)?
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "~" unary | "[" ("0"|"1") "]" unary | "<" ("0"|"1") ">" unary | atom
//   atom    := "T" | "F" | ident | "(" formula ")"
//   ident   := "p" digits
// ---------------------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownVariable : public std::runtime_error {
 public:
  UnknownVariable(const std::string& name, std::size_t offset)
      : std::runtime_error("unknown variable '" + name + "' at byte " + std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

Formula parse(std::string_view text, const VarContext& ctx);

/// Variables occurring in the given texts, ordered by their numeric suffix.
/// Throws ParseError on lexically invalid input.
VarContext infer_context(std::span<const std::string> texts);

enum class RenderMode {
  Sugared,           // minimal parentheses, ~[i]~A shown as <i>A
  FullyParenthesized // every binary node parenthesized, no diamond sugar
};

std::string render(Formula f, const VarContext& ctx, RenderMode mode = RenderMode::Sugared);

/// Modal depth: 0 on atoms, max over connectives, 1 + depth under a box.
inline std::size_t depth(Formula f) noexcept { return f.depth(); }

// ---------------------------------------------------------------------------
// Substitutions
// ---------------------------------------------------------------------------

/// Total map from context variables to formulas over the same context.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::vector<Formula> images);

  static Substitution identity(std::size_t n);

  std::size_t size() const noexcept { return images_.size(); }
  Formula operator[](std::size_t i) const { return images_.at(i); }
  const std::vector<Formula>& images() const noexcept { return images_; }

  /// Same variable count and identical images.
  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::vector<Formula> images_;
};

/// Simultaneous replacement of every variable occurrence.
Formula apply_subst(const Substitution& s, Formula f);

/// Replaces every occurrence of a key of `table` (outermost first).
Formula replace_subformulas(Formula f, const std::unordered_map<Formula, Formula, FormulaHash>& table);

/// (t s)(p) = t(s(p)).
Substitution compose(const Substitution& t, const Substitution& s);

}  // namespace j2kit

#endif  // J2KIT_FORMULA_HPP
