#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "direction.hpp"
#include "error.hpp"
#include "parity.hpp"
#include "rational.hpp"

namespace zcurv {

// Supercommutative differential polynomials over Q in named unknown
// functions, closed under d_x, d_y, D+ and D-, with an optional exp(linear
// form) factor per monomial. This is the algebra the zero-curvature
// derivations run in: odd unknowns anticommute, and the operator relations
// (D+)^2 = d_x, (D-)^2 = d_y, D+D- = -D-D+ are built into the canonical
// derivative word of each atom.

/// Canonical derivative word d_x^x d_y^y (D+)^plus (D-)^minus.
struct Word {
  int x = 0;
  int y = 0;
  bool plus = false;
  bool minus = false;

  bool empty() const { return x == 0 && y == 0 && !plus && !minus; }
  auto tie() const { return std::tuple(x, y, plus, minus); }
  friend bool operator==(const Word& a, const Word& b) { return a.tie() == b.tie(); }
  friend bool operator<(const Word& a, const Word& b) { return a.tie() < b.tie(); }
};

/// Applies one more derivation on the left of a word; returns the sign picked
/// up by reordering and the canonical result.
inline std::pair<int, Word> extend(Direction d, Word w) {
  switch (d) {
    case Direction::x: ++w.x; return {1, w};
    case Direction::y: ++w.y; return {1, w};
    case Direction::plus:
      if (w.plus) {
        w.plus = false;
        ++w.x;
      } else {
        w.plus = true;
      }
      return {1, w};
    case Direction::minus: {
      int sign = w.plus ? -1 : 1;  // D- moves past D+
      if (w.minus) {
        w.minus = false;
        ++w.y;
      } else {
        w.minus = true;
      }
      return {sign, w};
    }
  }
  return {1, w};
}

/// A derivative of a named unknown function. `rank` fixes the display and
/// canonical factor order of unknowns.
struct Atom {
  std::string name;
  Parity base = Parity::even;
  int rank = 0;
  Word word;

  Parity parity() const {
    Parity p = base;
    if (word.plus) p = p + Parity::odd;
    if (word.minus) p = p + Parity::odd;
    return p;
  }
  Atom with_word(Word w) const {
    Atom a = *this;
    a.word = w;
    return a;
  }

  friend bool operator==(const Atom& a, const Atom& b) { return a.name == b.name && a.word == b.word; }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.name != b.name) return a.name < b.name;
    return a.word < b.word;
  }

  std::string to_string() const {
    std::string s = name;
    if (word.x || word.y) s += "_" + std::string(word.x, 'x') + std::string(word.y, 'y');
    if (word.plus || word.minus)
      s = std::string(word.plus ? "D+" : "") + (word.minus ? "D-" : "") + "(" + s + ")";
    return s;
  }
};

/// Declares an unknown function; its atoms are obtained with `of()`.
struct Unknown {
  std::string name;
  Parity parity = Parity::even;
  int rank = 0;

  Atom atom(Word w = {}) const { return Atom{name, parity, rank, w}; }
};

using LinearForm = std::map<Atom, Rational>;

inline std::string render_linear(const LinearForm& L) {
  std::string out;
  for (auto& [a, c] : L) {
    Rational mag = abs(c);
    std::string t = mag == 1 ? a.to_string() : mag.get_str() + "*" + a.to_string();
    if (out.empty())
      out = c < 0 ? "-" + t : t;
    else
      out += (c < 0 ? " - " : " + ") + t;
  }
  return out.empty() ? "0" : out;
}

struct Monomial {
  std::vector<std::pair<Atom, int>> even;  // sorted, powers >= 1
  std::vector<Atom> odd;                   // strictly increasing
  LinearForm exp_arg;                      // exp(exp_arg); empty means no factor

  bool is_constant() const { return even.empty() && odd.empty() && exp_arg.empty(); }
  int degree() const {
    int d = static_cast<int>(odd.size()) + (exp_arg.empty() ? 0 : 1);
    for (auto& [a, k] : even) d += k;
    return d;
  }
  Parity parity() const { return odd.size() % 2 ? Parity::odd : Parity::even; }

  /// The monomial is exactly one atom to the first power.
  const Atom* single_atom() const {
    if (!exp_arg.empty()) return nullptr;
    if (odd.size() == 1 && even.empty()) return &odd[0];
    if (odd.empty() && even.size() == 1 && even[0].second == 1) return &even[0].first;
    return nullptr;
  }

  friend bool operator<(const Monomial& a, const Monomial& b) {
    return std::tie(a.even, a.odd, a.exp_arg) < std::tie(b.even, b.odd, b.exp_arg);
  }
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.even == b.even && a.odd == b.odd && a.exp_arg == b.exp_arg;
  }
};

/// Product of monomials; the sign from sorting odd factors, 0 if an odd
/// factor repeats.
inline std::pair<int, Monomial> multiply(const Monomial& a, const Monomial& b) {
  Monomial m;
  std::map<Atom, int> ev;
  for (auto& [x, k] : a.even) ev[x] += k;
  for (auto& [x, k] : b.even) ev[x] += k;
  m.even.assign(ev.begin(), ev.end());
  std::vector<Atom> odd = a.odd;
  odd.insert(odd.end(), b.odd.begin(), b.odd.end());
  int sign = 1;
  for (std::size_t i = 1; i < odd.size(); ++i)  // insertion sort, counting swaps
    for (std::size_t j = i; j > 0 && odd[j] < odd[j - 1]; --j) {
      std::swap(odd[j], odd[j - 1]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < odd.size(); ++i)
    if (odd[i] == odd[i - 1]) return {0, {}};
  m.odd = std::move(odd);
  m.exp_arg = a.exp_arg;
  for (auto& [x, c] : b.exp_arg) {
    Rational& slot = m.exp_arg[x];
    slot += c;
    if (slot == 0) m.exp_arg.erase(x);
  }
  return {sign, std::move(m)};
}

class Expr {
 public:
  Expr() = default;
  Expr(long c) : Expr(Rational(c)) {}  // NOLINT
  Expr(const Rational& c) {            // NOLINT
    if (c != 0) terms_.emplace(Monomial{}, c);
  }
  explicit Expr(const Atom& a) {
    Monomial m;
    if (a.parity() == Parity::odd)
      m.odd.push_back(a);
    else
      m.even.emplace_back(a, 1);
    terms_.emplace(std::move(m), Rational(1));
  }
  static Expr exp_of(const LinearForm& L) {
    for (auto& [a, c] : L)
      if (a.parity() != Parity::even) throw DomainError("exp of an odd quantity");
    Expr e;
    Monomial m;
    m.exp_arg = L;
    e.terms_.emplace(std::move(m), Rational(1));
    return e;
  }
  static Expr exp_of(const Atom& a) { return exp_of(LinearForm{{a, Rational(1)}}); }
  static Expr from_monomial(Monomial m, const Rational& c) {
    Expr e;
    if (c != 0) e.terms_.emplace(std::move(m), c);
    return e;
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_homogeneous() const {
    int p = -1;
    for (auto& [m, c] : terms_) {
      int q = bit(m.parity());
      if (p >= 0 && p != q) return false;
      p = q;
    }
    return true;
  }
  Parity parity() const {
    if (!is_homogeneous()) throw DomainError("expression is not homogeneous: " + to_string());
    return terms_.empty() ? Parity::even : terms_.begin()->first.parity();
  }

  Expr operator-() const { return scaled(Rational(-1)); }
  Expr scaled(const Rational& s) const {
    Expr out;
    if (s == 0) return out;
    for (auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
    return out;
  }
  Expr& operator+=(const Expr& o) {
    for (auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  Expr& operator-=(const Expr& o) {
    for (auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(const Expr& a, const Expr& b) {
    Expr out;
    for (auto& [ma, ca] : a.terms_)
      for (auto& [mb, cb] : b.terms_) {
        auto [s, m] = multiply(ma, mb);
        if (s) out.add(m, s * ca * cb);
      }
    return out;
  }
  friend Expr operator*(const Rational& s, const Expr& a) { return a.scaled(s); }
  friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_; }

  /// Canonical text used by every rendering: terms by degree, then by
  /// derivative weight, then unknown order.
  std::string to_string() const {
    std::vector<const std::pair<const Monomial, Rational>*> order;
    for (auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return render_less(a->first, b->first); });
    std::string out;
    for (auto* t : order) {
      const Rational& c = t->second;
      std::string body = render_monomial(t->first);
      Rational mag = abs(c);
      std::string term = body.empty() ? mag.get_str() : (mag == 1 ? body : mag.get_str() + "*" + body);
      if (out.empty())
        out = c < 0 ? "-" + term : term;
      else
        out += (c < 0 ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
  }

  /// Sign of the leading term in display order.
  int leading_sign() const {
    const std::pair<const Monomial, Rational>* best = nullptr;
    for (auto& t : terms_)
      if (!best || render_less(t.first, best->first)) best = &t;
    return !best ? 0 : (best->second < 0 ? -1 : 1);
  }

  static bool render_less(const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    auto fa = factors(a), fb = factors(b);
    for (std::size_t i = 0; i < std::min(fa.size(), fb.size()); ++i) {
      const Atom& x = fa[i].first;
      const Atom& y = fb[i].first;
      if (!(x.word == y.word)) return y.word < x.word;  // higher derivatives first
      if (x.rank != y.rank) return x.rank < y.rank;
      if (x.name != y.name) return x.name < y.name;
      if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second;
    }
    if (fa.size() != fb.size()) return fa.size() < fb.size();
    return a.exp_arg < b.exp_arg;
  }

  /// Atoms of a monomial in canonical order with their powers.
  static std::vector<std::pair<Atom, int>> factors(const Monomial& m) {
    std::vector<std::pair<Atom, int>> f = m.even;
    for (auto& a : m.odd) f.emplace_back(a, 1);
    std::sort(f.begin(), f.end(), [](auto& p, auto& q) { return p.first < q.first; });
    return f;
  }

 private:
  std::map<Monomial, Rational> terms_;

  void add(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // Odd atoms keep their relative order, so listing all factors in canonical
  // order needs no sign change.
  static std::string render_monomial(const Monomial& m) {
    std::string s;
    for (auto& [a, k] : factors(m)) {
      s += (s.empty() ? "" : "*") + a.to_string();
      if (k > 1) s += "^" + std::to_string(k);
    }
    if (!m.exp_arg.empty()) s += (s.empty() ? "" : "*") + std::string("exp(") + render_linear(m.exp_arg) + ")";
    return s;
  }
};

inline Expr atom_expr(const Atom& a) { return Expr(a); }

namespace detail {

// The monomial as an ordered list of single-factor expressions.
inline std::vector<Expr> factor_list(const Monomial& m) {
  std::vector<Expr> f;
  for (auto& [a, k] : m.even)
    for (int i = 0; i < k; ++i) f.emplace_back(a);
  for (auto& a : m.odd) f.emplace_back(a);
  if (!m.exp_arg.empty()) f.push_back(Expr::exp_of(m.exp_arg));
  return f;
}

inline Expr product(const std::vector<Expr>& fs, std::size_t from, std::size_t to) {
  Expr p(1);
  for (std::size_t i = from; i < to; ++i) p = p * fs[i];
  return p;
}

}  // namespace detail

/// Applies a derivation with the graded Leibniz rule.
inline Expr derive(Direction d, const Expr& e) {
  Expr out;
  const Parity pd = parity(d);
  for (auto& [m, c] : e.terms()) {
    std::vector<Expr> fs = detail::factor_list(m);
    Parity before = Parity::even;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const Monomial& fm = fs[k].terms().begin()->first;
      Expr dk;
      if (!fm.exp_arg.empty()) {
        Expr dl;
        for (auto& [a, coeff] : fm.exp_arg) {
          auto [s, w] = extend(d, a.word);
          dl += Expr(a.with_word(w)).scaled(coeff * s);
        }
        dk = dl * fs[k];
      } else {
        Atom a = Expr::factors(fm).front().first;
        auto [s, w] = extend(d, a.word);
        dk = Expr(a.with_word(w)).scaled(Rational(s));
      }
      int sign = koszul_sign(pd, before);
      out += (detail::product(fs, 0, k) * dk * detail::product(fs, k + 1, fs.size())).scaled(c * sign);
      before = before + fs[k].parity();
    }
  }
  return out;
}

/// d_x^x d_y^y (D+)^plus (D-)^minus applied to e.
inline Expr apply_word(const Word& w, Expr e) {
  if (w.minus) e = derive(Direction::minus, e);
  if (w.plus) e = derive(Direction::plus, e);
  for (int i = 0; i < w.y; ++i) e = derive(Direction::y, e);
  for (int i = 0; i < w.x; ++i) e = derive(Direction::x, e);
  return e;
}

namespace detail {

inline LinearForm as_linear(const Expr& e) {
  LinearForm L;
  for (auto& [m, c] : e.terms()) {
    const Atom* a = m.single_atom();
    if (!a) throw DomainError("exp argument would become non-linear: " + e.to_string());
    L[*a] += c;
  }
  return L;
}

template <class Replace>
Expr rebuild(const Expr& e, Replace replace) {
  Expr out;
  for (auto& [m, c] : e.terms()) {
    Expr term(c);
    for (auto& [a, k] : m.even)
      for (int i = 0; i < k; ++i) term = term * replace(a);
    for (auto& a : m.odd) term = term * replace(a);
    if (!m.exp_arg.empty()) {
      Expr arg;
      for (auto& [a, coeff] : m.exp_arg) arg += replace(a).scaled(coeff);
      LinearForm L = as_linear(arg);
      std::erase_if(L, [](auto& p) { return p.second == 0; });
      term = term * (L.empty() ? Expr(1) : Expr::exp_of(L));
    }
    out += term;
  }
  return out;
}

}  // namespace detail

/// Replaces the unknown `name` (and all its derivatives) by `value`.
inline Expr substitute(const Expr& e, const std::string& name, const Expr& value) {
  return detail::rebuild(e, [&](const Atom& a) {
    if (a.name != name) return Expr(a);
    if (!value.is_zero() && value.parity() != a.base)
      throw DomainError("substitution for '" + name + "' changes parity");
    return apply_word(a.word, value);
  });
}

/// Rewrites lhs (a pure d_x/d_y derivative of an unknown) and every further
/// derivative of it with the corresponding derivative of rhs.
inline Expr rewrite(const Expr& e, const Atom& lhs, const Expr& rhs) {
  if (lhs.word.plus || lhs.word.minus) throw DomainError("rewrite expects a d_x/d_y derivative");
  return detail::rebuild(e, [&](const Atom& a) {
    if (a.name != lhs.name || a.word.x < lhs.word.x || a.word.y < lhs.word.y) return Expr(a);
    Word rest = a.word;
    rest.x -= lhs.word.x;
    rest.y -= lhs.word.y;
    return apply_word(rest, rhs);
  });
}

/// Replaces one exact atom (not its derivatives) by value.
inline Expr replace_atom(const Expr& e, const Atom& target, const Expr& value) {
  return detail::rebuild(e, [&](const Atom& a) { return a == target ? value : Expr(a); });
}

/// Solves e = 0 for an atom occurring exactly once, linearly, with a
/// rational coefficient.
inline Expr solve_for(const Expr& e, const Atom& target) {
  Rational coeff = 0;
  Expr rest;
  for (auto& [m, c] : e.terms()) {
    const Atom* a = m.single_atom();
    if (a && *a == target) {
      coeff = c;
      continue;
    }
    for (auto& [x, k] : Expr::factors(m))
      if (x == target) throw DomainError("cannot isolate " + target.to_string() + " in " + e.to_string());
    rest += Expr::from_monomial(m, c);
  }
  if (coeff == 0) throw DomainError(target.to_string() + " does not occur in " + e.to_string());
  return rest.scaled(-1 / coeff);
}

/// Divides out a common exp factor; every term must carry exactly exp(L).
inline Expr strip_exp(const Expr& e, const LinearForm& L) {
  Expr out;
  for (auto& [m, c] : e.terms()) {
    if (m.exp_arg != L) throw DomainError("term without the common factor exp(" + render_linear(L) + ")");
    Monomial stripped = m;
    stripped.exp_arg.clear();
    out += Expr::from_monomial(stripped, c);
  }
  return out;
}

inline Parity parity_of(const Expr& e) { return e.parity(); }
inline Expr scaled(const Expr& e, const Rational& s) { return e.scaled(s); }
inline bool is_zero(const Expr& e) { return e.is_zero(); }

}  // namespace zcurv
