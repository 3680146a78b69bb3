#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace zcurv {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p", "-p", "p/q" or a terminating decimal such as "0.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&] { throw ParseError("not a rational number: '" + s + "'"); };
  if (s.empty()) fail();
  auto digits_ok = [](std::string_view d) {
    if (d.empty()) return false;
    for (char c : d)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string_view body = s;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!digits_ok(num) || !digits_ok(den)) fail();
    Integer d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    value = Rational(Integer(std::string(num)), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits_ok(whole) || !digits_ok(frac)) fail();
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    value = Rational(Integer(std::string(whole)) * scale + Integer(std::string(frac)), scale);
  } else {
    if (!digits_ok(body)) fail();
    value = Rational(Integer(std::string(body)));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Rational pow_int(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw DomainError("zero raised to a negative power");
    Rational inv = 1 / base;
    return pow_int(inv, -exponent);
  }
  Rational result = 1;
  Rational b = base;
  for (unsigned long e = static_cast<unsigned long>(exponent); e; e >>= 1) {
    if (e & 1) result *= b;
    b *= b;
  }
  return result;
}

/// Factorization of a positive integer into (prime, multiplicity) pairs,
/// ascending. Trial division up to 10^5; a remaining cofactor must be a
/// (probable) prime.
inline std::vector<std::pair<Integer, long>> factorize(Integer n) {
  if (n <= 0) throw DomainError("factorize expects a positive integer");
  std::vector<std::pair<Integer, long>> out;
  for (unsigned long p = 2; p <= 100000 && Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    long k = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      ++k;
    }
    if (k) out.emplace_back(Integer(p), k);
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw DomainError("cannot factor " + n.get_str() + " into small primes");
    out.emplace_back(n, 1);
  }
  return out;
}

}  // namespace zcurv
