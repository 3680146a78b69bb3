#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "number.hpp"
#include "rational.hpp"

namespace zcurv {

/// Per-coefficient-type operations needed by jets: the exact ring Number and
/// binary64 for numerical interop.
template <class T>
struct CoefficientTraits;

template <>
struct CoefficientTraits<Number> {
  static Number from_rational(const Rational& r) { return Number(r); }
  static Number scale(const Number& c, const Rational& s) { return c * s; }
  static Number exp(const Number& c) { return Number::exp(c); }
  static Number ln(const Number& c) { return Number::ln(c); }
  static Number inverse(const Number& c) { return c.inverse(); }
  static bool is_zero(const Number& c) { return c.is_zero(); }
  static std::string to_string(const Number& c) { return c.to_string(); }
  static double to_double(const Number& c) { return c.to_double(); }
};

template <>
struct CoefficientTraits<double> {
  static double from_rational(const Rational& r) { return r.get_d(); }
  static double scale(double c, const Rational& s) { return c * s.get_d(); }
  static double exp(double c) { return std::exp(c); }
  static double ln(double c) {
    if (c <= 0) throw DomainError("logarithm of a non-positive float");
    return std::log(c);
  }
  static double inverse(double c) {
    if (c == 0) throw DomainError("division by zero");
    return 1.0 / c;
  }
  static bool is_zero(double c) { return c == 0.0; }
  static std::string to_string(double c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
  }
  static double to_double(double c) { return c; }
};

/// Expansion point and truncation order shared by interoperating jets.
struct JetShape {
  Rational x0;
  Rational y0;
  int order = 8;

  friend bool operator==(const JetShape& a, const JetShape& b) {
    return a.x0 == b.x0 && a.y0 == b.y0 && a.order == b.order;
  }
};

inline constexpr int kDefaultOrder = 8;

// Truncated bivariate power series sum c_ij (x - x0)^i (y - y0)^j, i + j <= K.
// Inputs are read as exact polynomials of degree <= K: a derivative is exact
// and keeps the order, a product drops every term of total degree > K.
template <class T>
class Jet {
  using Traits = CoefficientTraits<T>;

 public:
  explicit Jet(JetShape shape) : shape_(std::move(shape)) {
    if (shape_.order < 0) throw DomainError("jet order must be non-negative");
    coeffs_.assign(size_for(shape_.order), Traits::from_rational(0));
  }

  static Jet constant(const JetShape& shape, const T& c) {
    Jet j(shape);
    j.coeffs_[0] = c;
    return j;
  }
  static Jet monomial(const JetShape& shape, int i, int j, const T& c) {
    Jet out(shape);
    if (i + j <= shape.order) out.coeffs_[index(i, j)] = c;
    return out;
  }
  /// The coordinate function x as a jet at the shape's base point.
  static Jet variable_x(const JetShape& shape) {
    Jet j = constant(shape, Traits::from_rational(shape.x0));
    if (shape.order >= 1) j.coeffs_[index(1, 0)] = Traits::from_rational(1);
    return j;
  }
  static Jet variable_y(const JetShape& shape) {
    Jet j = constant(shape, Traits::from_rational(shape.y0));
    if (shape.order >= 1) j.coeffs_[index(0, 1)] = Traits::from_rational(1);
    return j;
  }

  const JetShape& shape() const { return shape_; }
  int order() const { return shape_.order; }

  const T& coeff(int i, int j) const { return coeffs_[index(i, j)]; }
  void set(int i, int j, T value) {
    if (i < 0 || j < 0 || i + j > order()) throw DomainError("bidegree outside the jet order");
    coeffs_[index(i, j)] = std::move(value);
  }
  const T& constant_term() const { return coeffs_[0]; }

  bool is_zero() const { return is_zero_to(order()); }
  /// True when every coefficient of total degree <= k vanishes.
  bool is_zero_to(int k) const {
    k = std::min(k, order());
    for (std::size_t n = 0; n < size_for(k); ++n)
      if (!Traits::is_zero(coeffs_[n])) return false;
    return true;
  }
  bool depends_only_on_x() const {
    for (int d = 1; d <= order(); ++d)
      for (int j = 1; j <= d; ++j)
        if (!Traits::is_zero(coeff(d - j, j))) return false;
    return true;
  }
  bool depends_only_on_y() const {
    for (int d = 1; d <= order(); ++d)
      for (int j = 0; j < d; ++j)
        if (!Traits::is_zero(coeff(d - j, j))) return false;
    return true;
  }

  Jet truncated(int k) const {
    Jet out(*this);
    for (std::size_t n = size_for(std::max(k, -1)); n < out.coeffs_.size(); ++n)
      out.coeffs_[n] = Traits::from_rational(0);
    return out;
  }

  Jet d_x() const {
    Jet out(shape_);
    for (int d = 0; d < order(); ++d)
      for (int j = 0; j <= d; ++j) {
        int i = d - j;
        out.coeffs_[index(i, j)] = Traits::scale(coeff(i + 1, j), Rational(i + 1));
      }
    return out;
  }
  Jet d_y() const {
    Jet out(shape_);
    for (int d = 0; d < order(); ++d)
      for (int j = 0; j <= d; ++j) {
        int i = d - j;
        out.coeffs_[index(i, j)] = Traits::scale(coeff(i, j + 1), Rational(j + 1));
      }
    return out;
  }

  Jet operator-() const {
    Jet out(*this);
    for (auto& c : out.coeffs_) c = Traits::scale(c, Rational(-1));
    return out;
  }
  Jet& operator+=(const Jet& o) {
    require_compatible(o);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += o.coeffs_[n];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    require_compatible(o);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= o.coeffs_[n];
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.require_compatible(b);
    const int K = a.order();
    Jet out(a.shape_);
    for (int da = 0; da <= K; ++da)
      for (int ja = 0; ja <= da; ++ja) {
        const T& ca = a.coeff(da - ja, ja);
        if (Traits::is_zero(ca)) continue;
        for (int db = 0; da + db <= K; ++db)
          for (int jb = 0; jb <= db; ++jb) {
            const T& cb = b.coeff(db - jb, jb);
            if (Traits::is_zero(cb)) continue;
            out.coeffs_[index(da - ja + db - jb, ja + jb)] += ca * cb;
          }
      }
    return out;
  }
  friend Jet operator*(Jet a, const T& s) {
    for (auto& c : a.coeffs_) c = c * s;
    return a;
  }
  friend Jet operator*(const T& s, Jet a) { return std::move(a) * s; }
  Jet scaled(const Rational& s) const {
    Jet out(*this);
    for (auto& c : out.coeffs_) c = Traits::scale(c, s);
    return out;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.shape_ == b.shape_ && a.coeffs_ == b.coeffs_;
  }

  /// Agreement of all coefficients of total degree <= k.
  bool agrees_to(const Jet& o, int k) const {
    require_compatible(o);
    k = std::min(k, order());
    for (std::size_t n = 0; n < size_for(k); ++n)
      if (!(coeffs_[n] == o.coeffs_[n])) return false;
    return true;
  }

  /// Multiplicative inverse via the geometric series in the non-constant part.
  Jet inverse() const {
    T inv_c = Traits::inverse(constant_term());
    Jet s = *this;
    s.coeffs_[0] = Traits::from_rational(0);
    Jet q = s * (-inv_c);  // -(u - c)/c
    Jet sum = constant(shape_, Traits::from_rational(1));
    Jet power = sum;
    for (int k = 1; k <= order(); ++k) {
      power = power * q;
      sum += power;
    }
    return sum * inv_c;
  }

  Jet pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    Jet result = constant(shape_, Traits::from_rational(1));
    Jet base = *this;
    for (unsigned long e = static_cast<unsigned long>(n); e; e >>= 1) {
      if (e & 1) result = result * base;
      if (e > 1) base = base * base;
    }
    return result;
  }

  friend Jet exp(const Jet& u) {
    Jet s = u;
    s.coeffs_[0] = Traits::from_rational(0);
    Jet sum = constant(u.shape_, Traits::from_rational(1));
    Jet term = sum;
    for (int k = 1; k <= u.order(); ++k) {
      term = (term * s).scaled(Rational(1, k));
      sum += term;
    }
    return sum * Traits::exp(u.constant_term());
  }

  friend Jet ln(const Jet& u) {
    if (Traits::is_zero(u.constant_term())) throw DomainError("logarithm of a jet with zero body");
    T inv_c = Traits::inverse(u.constant_term());
    Jet s = u;
    s.coeffs_[0] = Traits::from_rational(0);
    s = s * inv_c;
    Jet sum(u.shape_);
    Jet power = constant(u.shape_, Traits::from_rational(1));
    for (int k = 1; k <= u.order(); ++k) {
      power = power * s;
      sum += power.scaled(Rational(k % 2 ? 1 : -1, k));
    }
    sum.coeffs_[0] = Traits::ln(u.constant_term());
    return sum;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.inverse(); }

  /// Evaluates the truncated polynomial at a point (floating point).
  double evaluate(double x, double y) const {
    double dx = x - shape_.x0.get_d();
    double dy = y - shape_.y0.get_d();
    double v = 0;
    for (int d = 0; d <= order(); ++d)
      for (int j = 0; j <= d; ++j) {
        int i = d - j;
        v += Traits::to_double(coeff(i, j)) * std::pow(dx, i) * std::pow(dy, j);
      }
    return v;
  }

  /// Canonical text: total degree, then descending x-degree.
  std::string to_string() const {
    std::string out;
    auto var = [](const char* name, const Rational& at, int power) -> std::string {
      if (power == 0) return "";
      std::string base = at == 0 ? std::string(name)
                                 : "(" + std::string(name) + (at > 0 ? "-" : "+") +
                                       to_string_abs(at) + ")";
      return power == 1 ? base : base + "^" + std::to_string(power);
    };
    for (int d = 0; d <= order(); ++d)
      for (int j = 0; j <= d; ++j) {
        int i = d - j;
        const T& c = coeff(i, j);
        if (Traits::is_zero(c)) continue;
        std::string mono = var("x", shape_.x0, i);
        std::string ym = var("y", shape_.y0, j);
        if (!ym.empty()) mono += (mono.empty() ? "" : "*") + ym;
        std::string cs = Traits::to_string(c);
        bool compound = cs.find_first_of("+ ") != std::string::npos ||
                        cs.find(" - ") != std::string::npos;
        if (compound) cs = "(" + cs + ")";
        std::string term = mono.empty() ? cs : (cs == "1" ? mono : cs == "-1" ? "-" + mono : cs + "*" + mono);
        if (out.empty())
          out = term;
        else if (term.front() == '-')
          out += " - " + term.substr(1);
        else
          out += " + " + term;
      }
    return out.empty() ? "0" : out;
  }

  static std::size_t index(int i, int j) {
    int d = i + j;
    return static_cast<std::size_t>(d * (d + 1) / 2 + j);
  }

 private:
  JetShape shape_;
  std::vector<T> coeffs_;  // by total degree, then y-degree

  static std::size_t size_for(int k) {
    return k < 0 ? 0 : static_cast<std::size_t>((k + 1) * (k + 2) / 2);
  }
  static std::string to_string_abs(const Rational& r) { return Rational(abs(r)).get_str(); }

  void require_compatible(const Jet& o) const {
    if (!(shape_ == o.shape_)) throw DomainError("jets have different base points or orders");
  }
};

/// F(phi(x), psi(y)) for phi depending on x only and psi on y only. The
/// bodies of phi and psi must equal the expansion point of F.
template <class T>
Jet<T> compose(const Jet<T>& F, const Jet<T>& phi, const Jet<T>& psi) {
  using Traits = CoefficientTraits<T>;
  if (!(phi.shape() == psi.shape())) throw DomainError("inner jets have different shapes");
  if (F.order() != phi.order()) throw DomainError("composition needs equal jet orders");
  if (!phi.depends_only_on_x() || !psi.depends_only_on_y())
    throw DomainError("composition expects phi(x) and psi(y)");
  if (!(phi.constant_term() == Traits::from_rational(F.shape().x0)) ||
      !(psi.constant_term() == Traits::from_rational(F.shape().y0)))
    throw DomainError("inner jet body does not match the outer expansion point");
  const JetShape& shape = phi.shape();
  const int K = F.order();
  Jet<T> u = phi - Jet<T>::constant(shape, phi.constant_term());
  Jet<T> v = psi - Jet<T>::constant(shape, psi.constant_term());
  std::vector<Jet<T>> upow{Jet<T>::constant(shape, Traits::from_rational(1))};
  std::vector<Jet<T>> vpow{upow[0]};
  for (int k = 1; k <= K; ++k) {
    upow.push_back(upow.back() * u);
    vpow.push_back(vpow.back() * v);
  }
  Jet<T> out(shape);
  for (int d = 0; d <= K; ++d)
    for (int j = 0; j <= d; ++j) {
      const T& c = F.coeff(d - j, j);
      if (Traits::is_zero(c)) continue;
      out += (upow[d - j] * vpow[j]) * c;
    }
  return out;
}

/// Coefficient-wise conversion to binary64.
inline Jet<double> to_float(const Jet<Number>& u) {
  Jet<double> out(u.shape());
  for (int d = 0; d <= u.order(); ++d)
    for (int j = 0; j <= d; ++j) out.set(d - j, j, u.coeff(d - j, j).to_double());
  return out;
}

}  // namespace zcurv
