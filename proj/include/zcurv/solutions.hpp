#pragma once

#include <vector>

#include "cartan.hpp"
#include "derive.hpp"
#include "jet.hpp"
#include "superfield.hpp"

namespace zcurv {

// Rank-1 normalizations used below:
//   F_xy = exp(2F)       (Liouville; also the F form with A = (2))
//   G_xy = 2 exp(G)      (the G form with A = (2)), G = 2F.

/// F = 1/2 ln(f'(x) g'(y) / (f(x) + g(y))^2).
template <class T>
Jet<T> liouville_solution(const Jet<T>& f, const Jet<T>& g) {
  using Traits = CoefficientTraits<T>;
  if (!f.depends_only_on_x()) throw DomainError("f must depend on x only");
  if (!g.depends_only_on_y()) throw DomainError("g must depend on y only");
  Jet<T> fx = f.d_x(), gy = g.d_y();
  if (Traits::is_zero(fx.constant_term())) throw DomainError("f' vanishes at the base point");
  if (Traits::is_zero(gy.constant_term())) throw DomainError("g' vanishes at the base point");
  Jet<T> s = f + g;
  if (Traits::is_zero(s.constant_term())) throw DomainError("f + g vanishes at the base point");
  return ln(fx * gy * s.pow(-2)).scaled(Rational(1, 2));
}

/// F_xy - exp(2F), to order K - 2.
template <class T>
Jet<T> liouville_residual(const Jet<T>& F) {
  return (F.d_x().d_y() - exp(F.scaled(Rational(2)))).truncated(F.order() - 2);
}

namespace detail {

template <class T>
std::vector<Jet<T>> combine(const CartanMatrix& A, const std::vector<Jet<T>>& F) {
  if (F.size() != A.rank()) throw DomainError("solution has " + std::to_string(F.size()) + " components for a rank " +
                                              std::to_string(A.rank()) + " matrix");
  std::vector<Jet<T>> out;
  for (std::size_t i = 0; i < A.rank(); ++i) {
    Jet<T> s(F[0].shape());
    for (std::size_t j = 0; j < A.rank(); ++j)
      if (A(i, j) != 0) s += F[j].scaled(A(i, j));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

/// LS: F_i,xy - exp(sum_j A_ij F_j);  LSbis: G_i,xy - sum_j A_ij exp(G_j).
/// Each component is truncated to order K - 2.
template <class T>
std::vector<Jet<T>> lse_residual(const CartanMatrix& A, const std::vector<Jet<T>>& F, TodaForm form) {
  if (!A.all_even()) throw DomainError("lse_residual needs an all-even Cartan matrix");
  std::vector<Jet<T>> out;
  if (form == TodaForm::LS) {
    std::vector<Jet<T>> AF = detail::combine(A, F);
    for (std::size_t i = 0; i < F.size(); ++i)
      out.push_back((F[i].d_x().d_y() - exp(AF[i])).truncated(F[i].order() - 2));
    return out;
  }
  std::vector<Jet<T>> E;
  for (auto& g : F) E.push_back(exp(g));
  std::vector<Jet<T>> AE = detail::combine(A, E);
  for (std::size_t i = 0; i < F.size(); ++i)
    out.push_back((F[i].d_x().d_y() - AE[i]).truncated(F[i].order() - 2));
  return out;
}

/// G = A F.
template <class T>
std::vector<Jet<T>> transform_GF(const CartanMatrix& A, const std::vector<Jet<T>>& F) {
  return detail::combine(A, F);
}

/// F = A^-1 G; refused for singular A.
template <class T>
std::vector<Jet<T>> transform_FG(const CartanMatrix& A, const std::vector<Jet<T>>& G) {
  auto inv = A.inverse();
  if (!inv) throw DomainError("Cartan matrix is singular; F = A^-1 G is undefined");
  CartanMatrix Ainv(*inv, A.parities());
  return detail::combine(Ainv, G);
}

/// F(phi(x), psi(y)) + 1/2 ln(phi'(x) psi'(y)).
template <class T>
Jet<T> conformal_transform(const Jet<T>& F, const Jet<T>& phi, const Jet<T>& psi) {
  using Traits = CoefficientTraits<T>;
  if (!phi.depends_only_on_x()) throw DomainError("phi must depend on x only");
  if (!psi.depends_only_on_y()) throw DomainError("psi must depend on y only");
  Jet<T> dphi = phi.d_x(), dpsi = psi.d_y();
  if (Traits::is_zero(dphi.constant_term())) throw DomainError("phi' vanishes at the base point");
  if (Traits::is_zero(dpsi.constant_term())) throw DomainError("psi' vanishes at the base point");
  return compose(F, phi, psi) + ln(dphi * dpsi).scaled(Rational(1, 2));
}

/// D+D-(F) - sign*exp(F), to order K - 2.
template <class T>
SuperField<T> super_liouville_residual(const SuperField<T>& F, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  return (d_plus(d_minus(F)) - exp_of(F).scaled(Rational(sign))).truncated(F.shape().order - 2);
}

}  // namespace zcurv
