#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "error.hpp"
#include "jet.hpp"
#include "parity.hpp"

namespace zcurv {

/// Bit masks of the odd generators in canonical order xi < eta < theta_1 < ...
inline constexpr std::uint32_t kXi = 1u << 0;
inline constexpr std::uint32_t kEta = 1u << 1;
inline constexpr std::uint32_t theta_bit(int k) { return 1u << (1 + k); }  // k >= 1

/// Sign of the product of Grassmann monomials a * b rewritten in canonical
/// order; 0 when they share a generator.
inline int grassmann_sign(std::uint32_t a, std::uint32_t b) {
  if (a & b) return 0;
  int swaps = 0;
  for (std::uint32_t rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return swaps % 2 ? -1 : 1;
}

// Element of the Grassmann algebra over xi, eta, theta_1..theta_m with jet
// coefficients: sum over subsets S of (prod_{g in S} g) * F_S(x, y), the
// product taken in canonical order. The thetas realize the auxiliary odd
// constants of a connection.
template <class T>
class SuperField {
  using Traits = CoefficientTraits<T>;

 public:
  SuperField(JetShape shape, int auxiliary) : shape_(std::move(shape)), auxiliary_(auxiliary) {
    if (auxiliary < 0 || auxiliary > 28) throw DomainError("unsupported number of auxiliary generators");
  }

  static SuperField from_jet(const Jet<T>& u, int auxiliary) {
    SuperField f(u.shape(), auxiliary);
    f.add_component(0, u);
    return f;
  }
  static SuperField constant(const JetShape& shape, int auxiliary, const T& c) {
    return from_jet(Jet<T>::constant(shape, c), auxiliary);
  }
  /// The product of the generators in mask, times the jet u.
  static SuperField monomial(std::uint32_t mask, const Jet<T>& u, int auxiliary) {
    SuperField f(u.shape(), auxiliary);
    f.check_mask(mask);
    f.add_component(mask, u);
    return f;
  }

  const JetShape& shape() const { return shape_; }
  int auxiliary() const { return auxiliary_; }
  int generator_count() const { return 2 + auxiliary_; }
  const std::map<std::uint32_t, Jet<T>>& components() const { return components_; }

  Jet<T> component(std::uint32_t mask) const {
    auto it = components_.find(mask);
    return it == components_.end() ? Jet<T>(shape_) : it->second;
  }
  Jet<T> body() const { return component(0); }

  bool is_zero() const { return components_.empty(); }

  bool is_homogeneous() const {
    int p = -1;
    for (auto& [m, u] : components_) {
      int q = std::popcount(m) % 2;
      if (p >= 0 && p != q) return false;
      p = q;
    }
    return true;
  }
  Parity parity() const {
    if (!is_homogeneous()) throw DomainError("superfield is not homogeneous");
    if (components_.empty()) return Parity::even;
    return std::popcount(components_.begin()->first) % 2 ? Parity::odd : Parity::even;
  }

  SuperField operator-() const {
    SuperField out(*this);
    for (auto& [m, u] : out.components_) u = -u;
    return out;
  }
  SuperField& operator+=(const SuperField& o) {
    require_compatible(o);
    for (auto& [m, u] : o.components_) add_component(m, u);
    return *this;
  }
  SuperField& operator-=(const SuperField& o) {
    require_compatible(o);
    for (auto& [m, u] : o.components_) add_component(m, -u);
    return *this;
  }
  friend SuperField operator+(SuperField a, const SuperField& b) { return a += b; }
  friend SuperField operator-(SuperField a, const SuperField& b) { return a -= b; }

  friend SuperField operator*(const SuperField& a, const SuperField& b) {
    a.require_compatible(b);
    SuperField out(a.shape_, a.auxiliary_);
    for (auto& [ma, ua] : a.components_)
      for (auto& [mb, ub] : b.components_) {
        int s = grassmann_sign(ma, mb);
        if (s == 0) continue;
        Jet<T> p = ua * ub;
        out.add_component(ma | mb, s > 0 ? p : -p);
      }
    return out;
  }
  SuperField scaled(const Rational& s) const {
    SuperField out(shape_, auxiliary_);
    for (auto& [m, u] : components_) out.add_component(m, u.scaled(s));
    return out;
  }
  friend SuperField operator*(const SuperField& a, const T& c) {
    SuperField out(a.shape_, a.auxiliary_);
    for (auto& [m, u] : a.components_) out.add_component(m, u * c);
    return out;
  }

  friend bool operator==(const SuperField& a, const SuperField& b) {
    return a.shape_ == b.shape_ && a.auxiliary_ == b.auxiliary_ && a.components_ == b.components_;
  }
  bool agrees_to(const SuperField& o, int k) const {
    require_compatible(o);
    SuperField diff = *this - o;
    for (auto& [m, u] : diff.components_)
      if (!u.is_zero_to(k)) return false;
    return true;
  }

  SuperField d_x() const { return map_jets([](const Jet<T>& u) { return u.d_x(); }); }
  SuperField d_y() const { return map_jets([](const Jet<T>& u) { return u.d_y(); }); }
  SuperField truncated(int k) const {
    return map_jets([k](const Jet<T>& u) { return u.truncated(k); });
  }

  /// Left derivative d/d(g) for the generator with bit g.
  SuperField d_odd(std::uint32_t g) const {
    SuperField out(shape_, auxiliary_);
    for (auto& [m, u] : components_) {
      if (!(m & g)) continue;
      int s = std::popcount(m & (g - 1)) % 2 ? -1 : 1;
      out.add_component(m & ~g, s > 0 ? u : -u);
    }
    return out;
  }
  /// Left multiplication by the generator with bit g.
  SuperField times_generator(std::uint32_t g) const {
    SuperField out(shape_, auxiliary_);
    for (auto& [m, u] : components_) {
      if (m & g) continue;
      int s = std::popcount(m & (g - 1)) % 2 ? -1 : 1;
      out.add_component(m | g, s > 0 ? u : -u);
    }
    return out;
  }

  /// Canonical text: components by subset size, then lexicographic subset.
  std::string to_string() const {
    std::vector<std::uint32_t> masks;
    for (auto& [m, u] : components_) masks.push_back(m);
    std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
      int pa = std::popcount(a), pb = std::popcount(b);
      if (pa != pb) return pa < pb;
      for (std::uint32_t g = 1; g; g <<= 1)
        if ((a & g) != (b & g)) return (a & g) != 0;
      return false;
    });
    std::string out;
    for (auto m : masks) {
      std::string gens = generator_names(m);
      std::string part = "(" + components_.at(m).to_string() + ")";
      if (!gens.empty()) part = gens + "*" + part;
      out += (out.empty() ? "" : " + ") + part;
    }
    return out.empty() ? "0" : out;
  }

  static std::string generator_names(std::uint32_t m) {
    std::string s;
    for (int b = 0; m >> b; ++b) {
      if (!((m >> b) & 1u)) continue;
      std::string n = b == 0 ? "xi" : b == 1 ? "eta" : "theta" + std::to_string(b - 1);
      s += (s.empty() ? "" : "*") + n;
    }
    return s;
  }

 private:
  JetShape shape_;
  int auxiliary_;
  std::map<std::uint32_t, Jet<T>> components_;  // nonzero jets only

  template <class F>
  SuperField map_jets(F f) const {
    SuperField out(shape_, auxiliary_);
    for (auto& [m, u] : components_) out.add_component(m, f(u));
    return out;
  }

  void add_component(std::uint32_t mask, const Jet<T>& u) {
    if (!(u.shape() == shape_)) throw DomainError("superfield components have different shapes");
    auto it = components_.find(mask);
    if (it == components_.end()) {
      if (!u.is_zero()) components_.emplace(mask, u);
      return;
    }
    it->second += u;
    if (it->second.is_zero()) components_.erase(it);
  }

  void check_mask(std::uint32_t mask) const {
    if (mask >> generator_count()) throw DomainError("generator index out of range");
  }

  void require_compatible(const SuperField& o) const {
    if (!(shape_ == o.shape_) || auxiliary_ != o.auxiliary_)
      throw DomainError("superfields have different shapes or generator sets");
  }
};

/// D+ = d/dxi + xi d/dx.
template <class T>
SuperField<T> d_plus(const SuperField<T>& F) {
  return F.d_odd(kXi) + F.d_x().times_generator(kXi);
}

/// D- = d/deta + eta d/dy.
template <class T>
SuperField<T> d_minus(const SuperField<T>& F) {
  return F.d_odd(kEta) + F.d_y().times_generator(kEta);
}

namespace detail {

template <class T>
void require_even(const SuperField<T>& F, const char* op) {
  if (!F.is_homogeneous() || F.parity() != Parity::even)
    throw DomainError(std::string(op) + " expects an even homogeneous superfield");
}

}  // namespace detail

/// exp(F) = exp(c) * sum_{k <= K + g} s^k / k! with c the constant body and s
/// the nilpotent-plus-higher-order remainder.
template <class T>
SuperField<T> exp_of(const SuperField<T>& F) {
  using Traits = CoefficientTraits<T>;
  detail::require_even(F, "exp_of");
  T c = F.body().constant_term();
  SuperField<T> s = F - SuperField<T>::constant(F.shape(), F.auxiliary(), c);
  SuperField<T> term = SuperField<T>::constant(F.shape(), F.auxiliary(), Traits::from_rational(1));
  SuperField<T> sum = term;
  const int bound = F.shape().order + F.generator_count();
  for (int k = 1; k <= bound && !term.is_zero(); ++k) {
    term = (term * s).scaled(Rational(1, k));
    sum += term;
  }
  return sum * Traits::exp(c);
}

/// ln(F) = ln(c) + sum_{k <= K + g} (-1)^(k+1) (s/c)^k / k.
template <class T>
SuperField<T> ln_of(const SuperField<T>& F) {
  using Traits = CoefficientTraits<T>;
  detail::require_even(F, "ln_of");
  T c = F.body().constant_term();
  if (Traits::is_zero(c)) throw DomainError("ln_of needs a nonzero body");
  SuperField<T> s = (F - SuperField<T>::constant(F.shape(), F.auxiliary(), c)) * Traits::inverse(c);
  SuperField<T> power = SuperField<T>::constant(F.shape(), F.auxiliary(), Traits::from_rational(1));
  SuperField<T> sum = SuperField<T>::constant(F.shape(), F.auxiliary(), Traits::ln(c));
  const int bound = F.shape().order + F.generator_count();
  for (int k = 1; k <= bound; ++k) {
    power = power * s;
    if (power.is_zero()) break;
    sum += power.scaled(Rational(k % 2 ? 1 : -1, k));
  }
  return sum;
}

/// Inverse of a superfield with invertible body.
template <class T>
SuperField<T> inverse_of(const SuperField<T>& F) {
  using Traits = CoefficientTraits<T>;
  T c = F.body().constant_term();
  T inv_c = Traits::inverse(c);
  SuperField<T> q = (F - SuperField<T>::constant(F.shape(), F.auxiliary(), c)) * (-inv_c);
  SuperField<T> power = SuperField<T>::constant(F.shape(), F.auxiliary(), Traits::from_rational(1));
  SuperField<T> sum = power;
  const int bound = F.shape().order + F.generator_count();
  for (int k = 1; k <= bound; ++k) {
    power = power * q;
    if (power.is_zero()) break;
    sum += power;
  }
  return sum * inv_c;
}

}  // namespace zcurv
