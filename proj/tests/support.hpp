#pragma once

#include <random>

#include "zcurv/jet.hpp"
#include "zcurv/number.hpp"
#include "zcurv/superfield.hpp"

namespace zt {

using namespace zcurv;

using Rng = std::mt19937_64;

inline Rational small_rational(Rng& rng, int span = 5, int den = 4) {
  std::uniform_int_distribution<int> n(-span, span), d(1, den);
  Rational r(n(rng), d(rng));
  r.canonicalize();
  return r;
}

inline Rational nonzero_rational(Rng& rng, int span = 5, int den = 4) {
  Rational r;
  do r = small_rational(rng, span, den);
  while (r == 0);
  return r;
}

// dense random jet; `fill` in [0, 1] thins out coefficients
inline Jet<Number> random_jet(const JetShape& s, Rng& rng, double fill = 0.6) {
  std::bernoulli_distribution keep(fill);
  Jet<Number> u(s);
  for (int d = 0; d <= s.order; ++d)
    for (int j = 0; j <= d; ++j)
      if (keep(rng)) u.set(d - j, j, Number(small_rational(rng)));
  return u;
}

inline Jet<Number> random_x_jet(const JetShape& s, Rng& rng) {
  Jet<Number> u(s);
  for (int i = 0; i <= s.order; ++i) u.set(i, 0, Number(small_rational(rng)));
  return u;
}

inline Jet<Number> random_y_jet(const JetShape& s, Rng& rng) {
  Jet<Number> u(s);
  for (int j = 0; j <= s.order; ++j) u.set(0, j, Number(small_rational(rng)));
  return u;
}

// homogeneous superfield over xi, eta and m auxiliary generators
inline SuperField<Number> random_superfield(const JetShape& s, int m, Parity p, Rng& rng, double fill = 0.35,
                                            bool zero_body = false) {
  std::bernoulli_distribution keep(fill);
  SuperField<Number> F(s, m);
  const std::uint32_t top = 1u << (2 + m);
  for (std::uint32_t mask = 0; mask < top; ++mask) {
    if (std::popcount(mask) % 2 != bit(p)) continue;
    if (mask != 0 && !keep(rng)) continue;
    Jet<Number> u = random_jet(s, rng, 0.4);
    if (mask == 0 && zero_body) u.set(0, 0, Number(0));
    F += SuperField<Number>::monomial(mask, u, m);
  }
  return F;
}

inline JetShape shape(int K, Rational x0 = 0, Rational y0 = 0) { return JetShape{x0, y0, K}; }

}  // namespace zt
