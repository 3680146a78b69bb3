#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace zcurv {

// Exact constants of the form
//
//   r + sum_k c_k * exp(q_k) * prod_p p^(e_pk) * prod_p ln(p)^(n_pk)
//
// with rationals r, c_k, q_k, root exponents 0 < e < 1 and natural log powers.
// Bases p are primes or -1. exp and ln of rationals stay symbolic, so
// exp(ln r) == r and ln(r s) == ln r + ln s hold exactly. Equality is
// syntactic on this canonical form.
class Number {
 public:
  struct Unit {
    Rational exponent;                                // exp(exponent)
    std::vector<std::pair<Integer, Rational>> roots;  // base^e, 0 < e < 1
    std::vector<std::pair<Integer, long>> logs;       // ln(base)^n, n >= 1

    bool trivial() const { return exponent == 0 && roots.empty() && logs.empty(); }
  };
  using Term = std::pair<Unit, Rational>;

  Number() = default;
  Number(long value) : rational_(value) {}  // NOLINT: implicit by design of a number type
  Number(Rational value) : rational_(std::move(value)) {}  // NOLINT

  /// exp(q) for a rational q.
  static Number exp_rational(const Rational& q) {
    if (q == 0) return Number(1);
    Number n;
    Unit u;
    u.exponent = q;
    n.terms_.emplace_back(std::move(u), Rational(1));
    return n;
  }

  /// ln(r) for a nonzero rational r, expanded over prime bases; a negative r
  /// contributes ln(-1).
  static Number ln_rational(const Rational& r) {
    if (r == 0) throw DomainError("logarithm of zero");
    Number out;
    if (r < 0) out += log_unit(Integer(-1));
    Rational a = abs(r);
    if (a.get_num() != 1)
      for (auto& [p, k] : factorize(a.get_num())) out += Number(Rational(k)) * log_unit(p);
    if (a.get_den() != 1)
      for (auto& [p, k] : factorize(a.get_den())) out -= Number(Rational(k)) * log_unit(p);
    return out;
  }

  bool is_zero() const { return rational_ == 0 && terms_.empty(); }
  bool is_rational() const { return terms_.empty(); }
  const Rational& rational_part() const { return rational_; }
  const std::vector<Term>& terms() const { return terms_; }

  Rational to_rational() const {
    if (!is_rational()) throw DomainError("constant " + to_string() + " is not rational");
    return rational_;
  }

  Number operator-() const {
    Number n(*this);
    n.rational_ = -n.rational_;
    for (auto& t : n.terms_) t.second = -t.second;
    return n;
  }

  Number& operator+=(const Number& other) {
    rational_ += other.rational_;
    if (!other.terms_.empty()) merge(other.terms_, Rational(1));
    return *this;
  }
  Number& operator-=(const Number& other) {
    rational_ -= other.rational_;
    if (!other.terms_.empty()) merge(other.terms_, Rational(-1));
    return *this;
  }
  Number& operator*=(const Number& other) {
    *this = *this * other;
    return *this;
  }

  friend Number operator+(Number a, const Number& b) { return a += b; }
  friend Number operator-(Number a, const Number& b) { return a -= b; }

  friend Number operator*(const Number& a, const Number& b) {
    if (a.terms_.empty() && b.terms_.empty()) return Number(Rational(a.rational_ * b.rational_));
    Number out(Rational(a.rational_ * b.rational_));
    std::vector<Term> acc;
    if (a.rational_ != 0)
      for (auto& [u, c] : b.terms_) acc.emplace_back(u, a.rational_ * c);
    if (b.rational_ != 0)
      for (auto& [u, c] : a.terms_) acc.emplace_back(u, b.rational_ * c);
    for (auto& [ua, ca] : a.terms_)
      for (auto& [ub, cb] : b.terms_) {
        auto [u, factor] = multiply_units(ua, ub);
        Rational c = ca * cb * factor;
        if (u.trivial())
          out.rational_ += c;
        else
          acc.emplace_back(std::move(u), std::move(c));
      }
    out.absorb(std::move(acc));
    return out;
  }

  friend Number operator*(const Number& a, const Rational& s) {
    if (s == 0) return Number();
    Number n(a);
    n.rational_ *= s;
    for (auto& t : n.terms_) t.second *= s;
    return n;
  }
  friend Number operator*(const Rational& s, const Number& a) { return a * s; }

  /// Multiplicative inverse; defined for single-term constants free of logarithms.
  Number inverse() const {
    if (terms_.empty()) {
      if (rational_ == 0) throw DomainError("division by zero");
      return Number(Rational(1 / rational_));
    }
    if (rational_ != 0 || terms_.size() != 1 || !terms_[0].first.logs.empty())
      throw DomainError("constant " + to_string() + " has no inverse in the constant ring");
    const auto& [u, c] = terms_[0];
    Unit inv;
    inv.exponent = -u.exponent;
    Rational factor = 1 / c;
    for (auto& [p, e] : u.roots) {
      inv.roots.emplace_back(p, 1 - e);
      factor /= Rational(p);
    }
    return from_term(std::move(inv), factor);
  }

  friend Number operator/(const Number& a, const Number& b) { return a * b.inverse(); }

  /// exp of a constant of the form q + sum_p c_p ln(p).
  static Number exp(const Number& x) {
    Unit u;
    u.exponent = x.rational_;
    Rational factor = 1;
    for (auto& [unit, c] : x.terms_) {
      if (unit.exponent != 0 || !unit.roots.empty() || unit.logs.size() != 1 ||
          unit.logs[0].second != 1)
        throw DomainError("exp of constant " + x.to_string() + " is outside the constant ring");
      const Integer& p = unit.logs[0].first;
      Integer whole = floor_of(c);
      Rational frac = c - Rational(whole);
      factor *= pow_int(Rational(p), whole.get_si());
      if (frac != 0) u.roots.emplace_back(p, frac);
    }
    return from_term(std::move(u), factor);
  }

  /// ln of a single-term constant c * exp(q) * prod p^e.
  static Number ln(const Number& x) {
    if (x.terms_.empty()) return ln_rational(x.rational_);
    if (x.rational_ != 0 || x.terms_.size() != 1 || !x.terms_[0].first.logs.empty())
      throw DomainError("ln of constant " + x.to_string() + " is outside the constant ring");
    const auto& [u, c] = x.terms_[0];
    Number out = ln_rational(c) + Number(u.exponent);
    for (auto& [p, e] : u.roots) out += Number(e) * log_unit(p);
    return out;
  }

  double to_double() const {
    double v = rational_.get_d();
    for (auto& [u, c] : terms_) {
      double t = c.get_d() * std::exp(u.exponent.get_d());
      for (auto& [p, e] : u.roots) {
        if (p < 0) throw DomainError("constant " + to_string() + " is not real");
        t *= std::pow(p.get_d(), e.get_d());
      }
      for (auto& [p, n] : u.logs) {
        if (p < 0) throw DomainError("constant " + to_string() + " is not real");
        t *= std::pow(std::log(p.get_d()), static_cast<double>(n));
      }
      v += t;
    }
    return v;
  }

  std::string to_string() const {
    std::string out;
    auto append = [&](const Rational& c, const std::string& unit) {
      bool neg = c < 0;
      Rational mag = abs(c);
      std::string body;
      if (unit.empty())
        body = mag.get_str();
      else if (mag == 1)
        body = unit;
      else
        body = mag.get_str() + "*" + unit;
      if (out.empty())
        out = neg ? "-" + body : body;
      else
        out += (neg ? " - " : " + ") + body;
    };
    if (rational_ != 0) append(rational_, "");
    for (auto& [u, c] : terms_) append(c, render_unit(u));
    return out.empty() ? "0" : out;
  }

  friend bool operator==(const Number& a, const Number& b) {
    if (a.rational_ != b.rational_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (compare(a.terms_[i].first, b.terms_[i].first) != 0 ||
          a.terms_[i].second != b.terms_[i].second)
        return false;
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const Number& n) { return os << n.to_string(); }

  static int compare(const Unit& a, const Unit& b) {
    if (int c = cmp(a.exponent, b.exponent)) return c;
    if (a.roots.size() != b.roots.size()) return a.roots.size() < b.roots.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.roots.size(); ++i) {
      if (int c = cmp(a.roots[i].first, b.roots[i].first)) return c;
      if (int c = cmp(a.roots[i].second, b.roots[i].second)) return c;
    }
    if (a.logs.size() != b.logs.size()) return a.logs.size() < b.logs.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.logs.size(); ++i) {
      if (int c = cmp(a.logs[i].first, b.logs[i].first)) return c;
      if (a.logs[i].second != b.logs[i].second) return a.logs[i].second < b.logs[i].second ? -1 : 1;
    }
    return 0;
  }

 private:
  Rational rational_;
  std::vector<Term> terms_;  // sorted by unit, nonzero coefficients, non-trivial units

  static Number log_unit(const Integer& p) {
    Unit u;
    u.logs.emplace_back(p, 1);
    return from_term(std::move(u), Rational(1));
  }

  static Number from_term(Unit u, const Rational& c) {
    Number n;
    if (c == 0) return n;
    if (u.trivial())
      n.rational_ = c;
    else
      n.terms_.emplace_back(std::move(u), c);
    return n;
  }

  static std::pair<Unit, Rational> multiply_units(const Unit& a, const Unit& b) {
    Unit u;
    Rational factor = 1;
    u.exponent = a.exponent + b.exponent;
    std::size_t i = 0, j = 0;
    auto push_root = [&](const Integer& p, Rational e) {
      if (e >= 1) {
        e -= 1;
        factor *= Rational(p);
      }
      if (e != 0) u.roots.emplace_back(p, std::move(e));
    };
    while (i < a.roots.size() || j < b.roots.size()) {
      if (j == b.roots.size() || (i < a.roots.size() && a.roots[i].first < b.roots[j].first)) {
        u.roots.push_back(a.roots[i++]);
      } else if (i == a.roots.size() || b.roots[j].first < a.roots[i].first) {
        u.roots.push_back(b.roots[j++]);
      } else {
        push_root(a.roots[i].first, a.roots[i].second + b.roots[j].second);
        ++i;
        ++j;
      }
    }
    i = j = 0;
    while (i < a.logs.size() || j < b.logs.size()) {
      if (j == b.logs.size() || (i < a.logs.size() && a.logs[i].first < b.logs[j].first))
        u.logs.push_back(a.logs[i++]);
      else if (i == a.logs.size() || b.logs[j].first < a.logs[i].first)
        u.logs.push_back(b.logs[j++]);
      else {
        u.logs.emplace_back(a.logs[i].first, a.logs[i].second + b.logs[j].second);
        ++i;
        ++j;
      }
    }
    return {std::move(u), factor};
  }

  void merge(const std::vector<Term>& other, const Rational& sign) {
    std::vector<Term> acc = terms_;
    for (auto& [u, c] : other) acc.emplace_back(u, sign * c);
    terms_.clear();
    absorb(std::move(acc));
  }

  // Sorts and combines like units into terms_ (which must be empty or already
  // included in acc).
  void absorb(std::vector<Term> acc) {
    std::sort(acc.begin(), acc.end(),
              [](const Term& x, const Term& y) { return compare(x.first, y.first) < 0; });
    terms_.clear();
    for (auto& t : acc) {
      if (!terms_.empty() && compare(terms_.back().first, t.first) == 0)
        terms_.back().second += t.second;
      else
        terms_.push_back(std::move(t));
      if (terms_.back().second == 0) terms_.pop_back();
    }
  }

  static std::string render_unit(const Unit& u) {
    std::string s;
    auto join = [&](const std::string& f) { s += (s.empty() ? "" : "*") + f; };
    if (u.exponent != 0) join("exp(" + u.exponent.get_str() + ")");
    for (auto& [p, e] : u.roots) join("(" + p.get_str() + ")^(" + e.get_str() + ")");
    for (auto& [p, n] : u.logs)
      join("ln(" + p.get_str() + ")" + (n == 1 ? "" : "^" + std::to_string(n)));
    return s;
  }
};

}  // namespace zcurv
