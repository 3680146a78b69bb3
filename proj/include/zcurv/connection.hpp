#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cartan.hpp"
#include "diffpoly.hpp"
#include "direction.hpp"
#include "superfield.hpp"
#include "supermatrix.hpp"

namespace zcurv {

/// Abstract generators with a structure-constant table. Brackets that leave
/// the declared span are stored as missing and throw when actually needed.
class GeneratorAlgebra {
 public:
  GeneratorAlgebra(std::vector<std::string> names, std::vector<Parity> parities,
                   std::map<std::pair<std::size_t, std::size_t>, std::optional<Combination>> table)
      : names_(std::move(names)), parities_(std::move(parities)), table_(std::move(table)) {}

  /// H_i, X_i^+, X_i^- with [H_i, X_j^+-] = +-A_ji X_j^+-, [X_i^+, X_j^-] = delta_ij H_i.
  /// Generators are listed H.., X-.., X+.. and named H, X-, X+ at rank 1,
  /// H1, X1-, X1+, ... otherwise.
  static GeneratorAlgebra chevalley(const CartanMatrix& A) {
    const std::size_t n = A.rank();
    std::vector<std::string> names;
    std::vector<Parity> par;
    auto label = [&](const std::string& s, std::size_t i) {
      return n == 1 ? s : s.substr(0, 1) + std::to_string(i + 1) + s.substr(1);
    };
    for (std::size_t i = 0; i < n; ++i) names.push_back(label("H", i)), par.push_back(Parity::even);
    for (std::size_t i = 0; i < n; ++i) names.push_back(label("X-", i)), par.push_back(A.parities()[i]);
    for (std::size_t i = 0; i < n; ++i) names.push_back(label("X+", i)), par.push_back(A.parities()[i]);
    auto H = [](std::size_t i) { return i; };
    auto Xm = [n](std::size_t i) { return n + i; };
    auto Xp = [n](std::size_t i) { return 2 * n + i; };

    std::map<std::pair<std::size_t, std::size_t>, std::optional<Combination>> t;
    auto put = [&](std::size_t u, std::size_t v, Combination c) {
      // graded antisymmetry fills the mirrored entry
      int s = -koszul_sign(par[u], par[v]);
      Combination mirrored;
      for (auto& [k, r] : c) mirrored.emplace_back(k, r * s);
      t[{u, v}] = std::move(c);
      t[{v, u}] = std::move(mirrored);
    };
    auto single = [](std::size_t k, const Rational& r) {
      return r == 0 ? Combination{} : Combination{{k, r}};
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        put(H(i), H(j), {});
        put(H(i), Xp(j), single(Xp(j), A(j, i)));
        put(H(i), Xm(j), single(Xm(j), -A(j, i)));
        put(Xp(i), Xm(j), i == j ? single(H(i), 1) : Combination{});
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        bool zero = i == j && A.parities()[i] == Parity::even;
        t[{Xp(i), Xp(j)}] = zero ? std::optional<Combination>(Combination{}) : std::nullopt;
        t[{Xm(i), Xm(j)}] = zero ? std::optional<Combination>(Combination{}) : std::nullopt;
      }
    return GeneratorAlgebra(std::move(names), std::move(par), std::move(t));
  }

  static GeneratorAlgebra from_table(const BracketTable& table) {
    std::map<std::pair<std::size_t, std::size_t>, std::optional<Combination>> t;
    for (std::size_t i = 0; i < table.size(); ++i)
      for (std::size_t j = 0; j < table.size(); ++j) t[{i, j}] = table.bracket(i, j);
    return GeneratorAlgebra(table.names(), table.parities(), std::move(t));
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  Parity parity(std::size_t i) const { return parities_.at(i); }
  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    throw DomainError("unknown generator '" + name + "'");
  }

  const Combination& bracket(std::size_t i, std::size_t j) const {
    auto it = table_.find({i, j});
    if (it == table_.end() || !it->second)
      throw DomainError("bracket [" + names_[i] + ", " + names_[j] + "] leaves the generator span");
    return *it->second;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Parity> parities_;
  std::map<std::pair<std::size_t, std::size_t>, std::optional<Combination>> table_;
};

// Coefficient-ring glue for superfields, so the same curvature code runs on
// symbolic expressions and on concrete superfields.
template <class T>
SuperField<T> derive(Direction d, const SuperField<T>& F) {
  switch (d) {
    case Direction::x: return F.d_x();
    case Direction::y: return F.d_y();
    case Direction::plus: return d_plus(F);
    case Direction::minus: return d_minus(F);
  }
  return F;
}
template <class T>
Parity parity_of(const SuperField<T>& F) { return F.parity(); }
template <class T>
SuperField<T> scaled(const SuperField<T>& F, const Rational& s) { return F.scaled(s); }
template <class T>
bool is_zero(const SuperField<T>& F) { return F.is_zero(); }

/// Finite sum of coefficient * generator.
template <class C>
class LieValuedField {
 public:
  explicit LieValuedField(std::shared_ptr<const GeneratorAlgebra> algebra) : algebra_(std::move(algebra)) {}

  const GeneratorAlgebra& algebra() const { return *algebra_; }
  const std::shared_ptr<const GeneratorAlgebra>& algebra_ptr() const { return algebra_; }
  const std::map<std::size_t, C>& coefficients() const { return coeffs_; }
  const C* coefficient(std::size_t i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? nullptr : &it->second;
  }
  const C* coefficient(const std::string& name) const { return coefficient(algebra_->index_of(name)); }
  bool is_zero() const { return coeffs_.empty(); }

  void add(std::size_t gen, const C& c) {
    if (zcurv::is_zero(c)) return;
    auto it = coeffs_.find(gen);
    if (it == coeffs_.end()) {
      coeffs_.emplace(gen, c);
      return;
    }
    it->second = it->second + c;
    if (zcurv::is_zero(it->second)) coeffs_.erase(it);
  }
  void add(const std::string& gen, const C& c) { add(algebra_->index_of(gen), c); }

  LieValuedField scaled(const Rational& s) const {
    LieValuedField out(algebra_);
    for (auto& [g, c] : coeffs_) out.add(g, zcurv::scaled(c, s));
    return out;
  }
  friend LieValuedField operator+(LieValuedField a, const LieValuedField& b) {
    for (auto& [g, c] : b.coeffs_) a.add(g, c);
    return a;
  }
  friend LieValuedField operator-(const LieValuedField& a, const LieValuedField& b) {
    return a + b.scaled(Rational(-1));
  }

 private:
  std::shared_ptr<const GeneratorAlgebra> algebra_;
  std::map<std::size_t, C> coeffs_;
};

/// Covariant derivative D + sum c_k T_k along a fixed direction.
template <class C>
class Connection {
 public:
  Connection(Direction d, LieValuedField<C> value) : direction_(d), value_(std::move(value)) {
    for (auto& [g, c] : value_.coefficients())
      if (parity_of(c) + value_.algebra().parity(g) != zcurv::parity(d))
        throw DomainError("coefficient of " + value_.algebra().name(g) + " has the wrong parity for " +
                          to_string(d));
  }

  Direction direction() const { return direction_; }
  Parity parity() const { return zcurv::parity(direction_); }
  const LieValuedField<C>& value() const { return value_; }

 private:
  Direction direction_;
  LieValuedField<C> value_;
};

/// A first-order operator: a combination of d_x, d_y, D+, D- plus a
/// generator-valued part.
template <class C>
struct OperatorBracket {
  std::map<Direction, Rational> derivations;
  LieValuedField<C> field;
};

namespace detail {

// [D1, D2] for the basic directions.
inline std::map<Direction, Rational> direction_bracket(Direction a, Direction b) {
  if (a == Direction::plus && b == Direction::plus) return {{Direction::x, Rational(2)}};
  if (a == Direction::minus && b == Direction::minus) return {{Direction::y, Rational(2)}};
  return {};
}

}  // namespace detail

/// Graded commutator of two covariant derivatives, with
///   [D1, c T] = D1(c) T,
///   [c T, D2] = -(-1)^{p1 p2} D2(c) T,
///   [c1 T1, c2 T2] = (-1)^{p(T1) p(c2)} c1 c2 [T1, T2].
template <class C>
OperatorBracket<C> bracket(const Connection<C>& n1, const Connection<C>& n2) {
  const auto& alg = n1.value().algebra_ptr();
  if (alg.get() != n2.value().algebra_ptr().get())
    throw DomainError("connections over different algebras");
  OperatorBracket<C> out{detail::direction_bracket(n1.direction(), n2.direction()), LieValuedField<C>(alg)};
  const int swap = koszul_sign(n1.parity(), n2.parity());
  for (auto& [g, c] : n2.value().coefficients()) out.field.add(g, derive(n1.direction(), c));
  for (auto& [g, c] : n1.value().coefficients()) out.field.add(g, zcurv::scaled(derive(n2.direction(), c), Rational(-swap)));
  for (auto& [g1, c1] : n1.value().coefficients())
    for (auto& [g2, c2] : n2.value().coefficients()) {
      const Combination& br = alg->bracket(g1, g2);
      if (br.empty()) continue;
      C prod = c1 * c2;
      int s = koszul_sign(alg->parity(g1), parity_of(c2));
      for (auto& [k, r] : br) out.field.add(k, zcurv::scaled(prod, r * s));
    }
  return out;
}

/// R(D1, D2) for pairs of directions whose bracket vanishes: (d_x, d_y) and
/// (D+, D-).
template <class C>
LieValuedField<C> curvature(const Connection<C>& n1, const Connection<C>& n2) {
  OperatorBracket<C> b = bracket(n1, n2);
  if (!b.derivations.empty())
    throw DomainError("curvature along " + to_string(n1.direction()) + ", " + to_string(n2.direction()) +
                      " needs a connection along their bracket");
  return b.field;
}

}  // namespace zcurv
