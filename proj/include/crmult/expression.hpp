#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "crmult/jet.hpp"

namespace crmult {

/// 1-based position of the first character of an expression inside a larger
/// source (a problem file line, say).
struct SourcePos {
  int line = 1;
  int column = 1;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, ImaginaryUnit, Variable, Negate, Add, Subtract, Multiply, Power, Conj };
  Kind kind;
  GaussianRational value;  // Number
  std::size_t var = 0;     // Variable
  int exponent = 0;        // Power
  std::vector<ExprPtr> args;
};

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view src, const VariableSet& vars, SourcePos origin)
      : src_(src), vars_(vars), origin_(origin) {}

  ExprPtr parse() {
    next();
    ExprPtr e = sum();
    if (tok_.kind != Tok::End) fail(tok_, "expected operator or end of input");
    return e;
  }

 private:
  enum class Tok { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End, Bad };
  struct Token {
    Tok kind = Tok::End;
    std::size_t pos = 0;
    std::string text;
  };

  [[noreturn]] void fail(const Token& t, const std::string& what, Errc code = Errc::SyntaxError) const {
    int line = origin_.line, col = origin_.column;
    for (std::size_t k = 0; k < t.pos; ++k) {
      if (src_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(code, line, col, what);
  }

  static bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
  static bool ident_char(char c) { return ident_start(c) || digit(c); }

  void next() {
    while (p_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[p_]))) ++p_;
    tok_ = Token{Tok::End, p_, {}};
    if (p_ >= src_.size()) return;
    const char c = src_[p_];
    if (digit(c)) {
      std::size_t q = p_;
      while (q < src_.size() && digit(src_[q])) ++q;
      if (q + 1 < src_.size() && src_[q] == '/' && digit(src_[q + 1])) {
        ++q;
        while (q < src_.size() && digit(src_[q])) ++q;
      }
      tok_ = Token{Tok::Number, p_, std::string(src_.substr(p_, q - p_))};
      p_ = q;
      return;
    }
    if (ident_start(c)) {
      std::size_t q = p_;
      while (q < src_.size() && ident_char(src_[q])) ++q;
      tok_ = Token{Tok::Ident, p_, std::string(src_.substr(p_, q - p_))};
      p_ = q;
      return;
    }
    Tok k = Tok::Bad;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default: break;
    }
    tok_ = Token{k, p_, std::string(1, c)};
    if (k == Tok::Bad) fail(tok_, "unexpected character '" + tok_.text + "'");
    ++p_;
  }

  static ExprPtr node(Expr::Kind k, std::vector<ExprPtr> args = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->args = std::move(args);
    return e;
  }

  ExprPtr sum() {
    ExprPtr lhs = product();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      auto k = tok_.kind == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Subtract;
      next();
      lhs = node(k, {lhs, product()});
    }
    return lhs;
  }

  ExprPtr product() {
    ExprPtr lhs = unary();
    while (tok_.kind == Tok::Star) {
      next();
      lhs = node(Expr::Kind::Multiply, {lhs, unary()});
    }
    return lhs;
  }

  ExprPtr unary() {
    if (tok_.kind == Tok::Minus) {
      next();
      return node(Expr::Kind::Negate, {unary()});
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (tok_.kind != Tok::Caret) return base;
    next();
    if (tok_.kind != Tok::Number || tok_.text.find('/') != std::string::npos)
      fail(tok_, "expected non-negative integer exponent");
    if (tok_.text.size() > 3 || std::stoi(tok_.text) > 255) fail(tok_, "exponent too large");
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Power;
    e->exponent = std::stoi(tok_.text);
    e->args = {base};
    next();
    if (tok_.kind == Tok::Caret) fail(tok_, "chained exponent; add parentheses");
    return e;
  }

  ExprPtr primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::Number: {
        mpq_class q;
        const auto slash = t.text.find('/');
        q = slash == std::string::npos ? mpq_class(mpz_class(t.text))
                                       : mpq_class(mpz_class(t.text.substr(0, slash)),
                                                   mpz_class(t.text.substr(slash + 1)));
        if (slash != std::string::npos && q.get_den() == 0) fail(t, "zero denominator");
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Number;
        e->value = GaussianRational(q);
        next();
        return e;
      }
      case Tok::Ident: {
        next();
        if (t.text == "conj") {
          if (tok_.kind != Tok::LParen) fail(tok_, "expected '(' after conj");
          next();
          ExprPtr inner = sum();
          if (tok_.kind != Tok::RParen) fail(tok_, "expected ')'");
          next();
          return node(Expr::Kind::Conj, {inner});
        }
        if (auto v = lookup(t.text)) {
          auto e = std::make_shared<Expr>();
          e->kind = Expr::Kind::Variable;
          e->var = *v;
          return e;
        }
        if (t.text == "i") return node(Expr::Kind::ImaginaryUnit);
        fail(t, "unknown variable '" + t.text + "'", Errc::UnknownVariable);
      }
      case Tok::LParen: {
        next();
        ExprPtr inner = sum();
        if (tok_.kind != Tok::RParen) fail(tok_, "expected ')'");
        next();
        return inner;
      }
      case Tok::End: fail(t, "expected operand, found end of input");
      default: fail(t, "expected operand, found '" + t.text + "'");
    }
  }

  std::optional<std::size_t> lookup(const std::string& name) const {
    if (auto v = vars_.find(name)) return v;
    if (vars_.is_cr() && vars_.n() == 1) {
      if (name == "z") return vars_.z(1);
      if (name == "zb") return vars_.zb(1);
    }
    return std::nullopt;
  }

  std::string_view src_;
  const VariableSet& vars_;
  SourcePos origin_;
  std::size_t p_ = 0;
  Token tok_;
};

}  // namespace detail

/// Parses + - * ^ (integer exponents), unary minus, rational literals a/b,
/// the imaginary unit i, conj(...) and the variables of `vars`. With n = 1,
/// z and zb are accepted for z1 and zb1.
inline ExprPtr parse_ast(std::string_view src, const VariableSet& vars, SourcePos origin = {}) {
  return detail::ExpressionParser(src, vars, origin).parse();
}

inline Jet evaluate(const Expr& e, const VarsPtr& vars, int order) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Number: return Jet::constant(vars, order, e.value);
    case K::ImaginaryUnit: return Jet::constant(vars, order, GaussianRational::i());
    case K::Variable: return Jet::variable(vars, order, e.var);
    case K::Negate: return -evaluate(*e.args[0], vars, order);
    case K::Conj: return evaluate(*e.args[0], vars, order).conj();
    case K::Add: return evaluate(*e.args[0], vars, order) + evaluate(*e.args[1], vars, order);
    case K::Subtract: return evaluate(*e.args[0], vars, order) - evaluate(*e.args[1], vars, order);
    case K::Multiply: return evaluate(*e.args[0], vars, order) * evaluate(*e.args[1], vars, order);
    case K::Power: {
      Jet base = evaluate(*e.args[0], vars, order);
      Jet r = Jet::constant(vars, order, 1);
      for (int k = e.exponent; k > 0; k >>= 1) {
        if (k & 1) r *= base;
        if (k > 1) base *= base;
      }
      return r;
    }
  }
  throw Error(Errc::InvalidInput, "malformed expression tree");
}

inline Jet parse_expression(std::string_view src, const VarsPtr& vars, int order, SourcePos origin = {}) {
  return evaluate(*parse_ast(src, *vars, origin), vars, order);
}

}  // namespace crmult
