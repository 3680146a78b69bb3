#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include "error.hpp"
#include "jet.hpp"
#include "rational.hpp"

namespace zcurv {

// Closed expressions in x and y:
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := ('+' | '-') unary | power
//   power := atom ('^' ['-'] integer)?
//   atom  := number | 'x' | 'y' | ('exp' | 'ln') '(' expr ')' | '(' expr ')'
//
// Numbers are integers or decimals; p/q is ordinary division.

struct ExprNode {
  enum class Kind { number, x, y, add, sub, mul, div, neg, pow, exp, ln };
  Kind kind;
  Rational value;  // number
  long power = 0;  // pow
  std::shared_ptr<const ExprNode> lhs, rhs;

  bool depends_on_x() const {
    return kind == Kind::x || (lhs && lhs->depends_on_x()) || (rhs && rhs->depends_on_x());
  }
  bool depends_on_y() const {
    return kind == Kind::y || (lhs && lhs->depends_on_y()) || (rhs && rhs->depends_on_y());
  }
};

using ExprPtr = std::shared_ptr<const ExprNode>;

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (i_ != text_.size()) fail("unexpected '" + std::string(1, text_[i_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression: " + what, 1, static_cast<int>(i_ + 1));
  }
  void skip() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < text_.size() && text_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  static ExprPtr node(ExprNode::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+'))
        e = node(ExprNode::Kind::add, e, term());
      else if (eat('-'))
        e = node(ExprNode::Kind::sub, e, term());
      else
        return e;
    }
  }
  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      if (eat('*'))
        e = node(ExprNode::Kind::mul, e, unary());
      else if (eat('/'))
        e = node(ExprNode::Kind::div, e, unary());
      else
        return e;
    }
  }
  ExprPtr unary() {
    if (eat('-')) return node(ExprNode::Kind::neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  ExprPtr power() {
    ExprPtr base = atom();
    if (!eat('^')) return base;
    bool negative = eat('-');
    skip();
    std::size_t start = i_;
    while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) ++i_;
    if (start == i_) fail("exponent must be an integer");
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::pow;
    n->lhs = base;
    n->power = std::stol(std::string(text_.substr(start, i_ - start)));
    if (negative) n->power = -n->power;
    return n;
  }
  ExprPtr atom() {
    skip();
    if (i_ >= text_.size()) fail("unexpected end of input");
    char c = text_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = i_;
      while (i_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[i_])) || text_[i_] == '.')) ++i_;
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::number;
      try {
        n->value = parse_rational(std::string(text_.substr(start, i_ - start)));
      } catch (const ParseError&) {
        i_ = start;
        fail("malformed number");
      }
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i_;
      while (i_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[i_]))) ++i_;
      std::string_view word = text_.substr(start, i_ - start);
      if (word == "x") return node(ExprNode::Kind::x);
      if (word == "y") return node(ExprNode::Kind::y);
      if (word == "exp" || word == "ln") {
        if (!eat('(')) fail("expected '(' after " + std::string(word));
        ExprPtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return node(word == "exp" ? ExprNode::Kind::exp : ExprNode::Kind::ln, arg);
      }
      i_ = start;
      fail("unknown identifier '" + std::string(word) + "'");
    }
    if (eat('(')) {
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

inline ExprPtr parse_expression(std::string_view text) { return ExprParser(text).parse(); }

/// Jet of an expression at the shape's base point.
template <class T>
Jet<T> to_jet(const ExprNode& e, const JetShape& shape) {
  using K = ExprNode::Kind;
  using Traits = CoefficientTraits<T>;
  switch (e.kind) {
    case K::number: return Jet<T>::constant(shape, Traits::from_rational(e.value));
    case K::x: return Jet<T>::variable_x(shape);
    case K::y: return Jet<T>::variable_y(shape);
    case K::add: return to_jet<T>(*e.lhs, shape) + to_jet<T>(*e.rhs, shape);
    case K::sub: return to_jet<T>(*e.lhs, shape) - to_jet<T>(*e.rhs, shape);
    case K::mul: return to_jet<T>(*e.lhs, shape) * to_jet<T>(*e.rhs, shape);
    case K::div: {
      Jet<T> d = to_jet<T>(*e.rhs, shape);
      if (Traits::is_zero(d.constant_term())) throw DomainError("division by a jet with zero body");
      return to_jet<T>(*e.lhs, shape) / d;
    }
    case K::neg: return -to_jet<T>(*e.lhs, shape);
    case K::pow: {
      Jet<T> b = to_jet<T>(*e.lhs, shape);
      if (e.power < 0 && Traits::is_zero(b.constant_term())) throw DomainError("negative power of a jet with zero body");
      return b.pow(e.power);
    }
    case K::exp: return exp(to_jet<T>(*e.lhs, shape));
    case K::ln: return ln(to_jet<T>(*e.lhs, shape));
  }
  throw DomainError("bad expression node");
}

/// Value of an expression at a point.
inline double evaluate(const ExprNode& e, double x, double y) {
  using K = ExprNode::Kind;
  switch (e.kind) {
    case K::number: return e.value.get_d();
    case K::x: return x;
    case K::y: return y;
    case K::add: return evaluate(*e.lhs, x, y) + evaluate(*e.rhs, x, y);
    case K::sub: return evaluate(*e.lhs, x, y) - evaluate(*e.rhs, x, y);
    case K::mul: return evaluate(*e.lhs, x, y) * evaluate(*e.rhs, x, y);
    case K::div: return evaluate(*e.lhs, x, y) / evaluate(*e.rhs, x, y);
    case K::neg: return -evaluate(*e.lhs, x, y);
    case K::pow: return std::pow(evaluate(*e.lhs, x, y), static_cast<double>(e.power));
    case K::exp: return std::exp(evaluate(*e.lhs, x, y));
    case K::ln: return std::log(evaluate(*e.lhs, x, y));
  }
  return 0;
}

}  // namespace zcurv
