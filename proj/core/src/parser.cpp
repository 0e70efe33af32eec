#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>

#include "j2kit/formula.hpp"

namespace j2kit {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const VarContext* ctx) : text_(text), ctx_(ctx) {}

  Formula parse_all() {
    Formula f = parse_impl();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return f;
  }

  // Lexes identifiers only; used to infer a context.
  void collect_identifiers(std::set<std::pair<unsigned long long, std::string>>& out) {
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size()) return;
      char c = text_[pos_];
      if (c == 'p') {
        std::size_t start = pos_;
        std::string name = lex_ident();
        if (name.size() > 20) throw ParseError("variable index too large", start);
        out.emplace(std::stoull(name.substr(1)), name);
        continue;
      }
      if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        pos_ += 2;
        continue;
      }
      if (std::string_view("~&|()[]<>01TF").find(c) == std::string_view::npos) {
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
      }
      ++pos_;
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) throw ParseError("expected '" + std::string(tok) + "'", pos_);
  }

  Formula parse_impl() {
    Formula lhs = parse_or();
    if (accept("->")) return Formula::implies(lhs, parse_impl());
    return lhs;
  }

  Formula parse_or() {
    Formula acc = parse_and();
    while (accept("|")) acc = Formula::disj(acc, parse_and());
    return acc;
  }

  Formula parse_and() {
    Formula acc = parse_unary();
    while (accept("&")) acc = Formula::conj(acc, parse_unary());
    return acc;
  }

  int parse_modality_index() {
    skip_ws();
    if (pos_ < text_.size() && (text_[pos_] == '0' || text_[pos_] == '1')) {
      return text_[pos_++] - '0';
    }
    throw ParseError("expected modality index 0 or 1", pos_);
  }

  Formula parse_unary() {
    if (accept("~")) return Formula::neg(parse_unary());
    if (accept("[")) {
      int m = parse_modality_index();
      expect("]");
      return Formula::box(m, parse_unary());
    }
    skip_ws();
    // "<" cannot start "->", so no ambiguity here.
    if (accept("<")) {
      int m = parse_modality_index();
      expect(">");
      return Formula::diamond(m, parse_unary());
    }
    return parse_atom();
  }

  std::string lex_ident() {
    std::size_t start = pos_;
    ++pos_;  // 'p'
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError("expected digits after 'p'", pos_);
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == 'T') {
      ++pos_;
      return Formula::top();
    }
    if (c == 'F') {
      ++pos_;
      return Formula::bot();
    }
    if (c == '(') {
      ++pos_;
      Formula f = parse_impl();
      expect(")");
      return f;
    }
    if (c == 'p') {
      std::size_t start = pos_;
      std::string name = lex_ident();
      auto idx = ctx_->index_of(name);
      if (!idx) throw UnknownVariable(name, start);
      return Formula::var(*idx);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view text_;
  const VarContext* ctx_;
  std::size_t pos_ = 0;
};

// Precedence levels: 0 implication, 1 disjunction, 2 conjunction, 3 unary/atom.
int level(Formula f) {
  switch (f.kind()) {
    case Kind::Implies: return 0;
    case Kind::Or: return 1;
    case Kind::And: return 2;
    default: return 3;
  }
}

class Renderer {
 public:
  Renderer(const VarContext& ctx, RenderMode mode) : ctx_(ctx), mode_(mode) {}

  void emit(Formula f, int min_level, std::string& out) {
    bool paren = mode_ == RenderMode::FullyParenthesized ? f.is_binary() : level(f) < min_level;
    if (paren) out += '(';
    switch (f.kind()) {
      case Kind::Var:
        if (f.var_index() < ctx_.size()) {
          out += ctx_.name(f.var_index());
        } else {
          out += "p" + std::to_string(f.var_index() + 1);
        }
        break;
      case Kind::Top: out += 'T'; break;
      case Kind::Bot: out += 'F'; break;
      case Kind::Not: {
        Formula inner = f.lhs();
        if (mode_ == RenderMode::Sugared && inner.kind() == Kind::Box &&
            inner.lhs().kind() == Kind::Not) {
          out += '<';
          out += static_cast<char>('0' + inner.modality());
          out += '>';
          emit(inner.lhs().lhs(), 3, out);
        } else {
          out += '~';
          emit(inner, 3, out);
        }
        break;
      }
      case Kind::Box:
        out += '[';
        out += static_cast<char>('0' + f.modality());
        out += ']';
        emit(f.lhs(), 3, out);
        break;
      case Kind::And:
        emit(f.lhs(), 2, out);
        out += " & ";
        emit(f.rhs(), 3, out);
        break;
      case Kind::Or:
        emit(f.lhs(), 1, out);
        out += " | ";
        emit(f.rhs(), 2, out);
        break;
      case Kind::Implies:
        emit(f.lhs(), 1, out);
        out += " -> ";
        emit(f.rhs(), 0, out);
        break;
    }
    if (paren) out += ')';
  }

 private:
  const VarContext& ctx_;
  RenderMode mode_;
};

}  // namespace

Formula parse(std::string_view text, const VarContext& ctx) {
  return Parser(text, &ctx).parse_all();
}

VarContext infer_context(std::span<const std::string> texts) {
  std::set<std::pair<unsigned long long, std::string>> ids;
  for (const auto& t : texts) Parser(t, nullptr).collect_identifiers(ids);
  std::vector<std::string> names;
  for (const auto& [num, name] : ids) {
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  }
  return VarContext(std::move(names));
}

std::string render(Formula f, const VarContext& ctx, RenderMode mode) {
  std::string out;
  Renderer(ctx, mode).emit(f, 0, out);
  return out;
}

}  // namespace j2kit
