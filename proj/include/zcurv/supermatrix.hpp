#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "parity.hpp"
#include "rational.hpp"

namespace zcurv {

/// Square rational matrix over a Z/2-graded space; entry (i, j) has parity
/// p_i + p_j.
class SuperMatrix {
 public:
  SuperMatrix(std::vector<std::vector<Rational>> entries, std::vector<Parity> parities)
      : entries_(std::move(entries)), parities_(std::move(parities)) {
    for (auto& row : entries_)
      if (row.size() != entries_.size()) throw DomainError("supermatrix must be square");
    if (parities_.size() != entries_.size()) throw DomainError("parity vector length mismatch");
  }

  static SuperMatrix zero(std::vector<Parity> parities) {
    std::size_t n = parities.size();
    return SuperMatrix(std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)), std::move(parities));
  }
  static SuperMatrix identity(std::vector<Parity> parities) {
    SuperMatrix m = zero(std::move(parities));
    for (std::size_t i = 0; i < m.size(); ++i) m.entries_[i][i] = 1;
    return m;
  }

  std::size_t size() const { return entries_.size(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i][j]; }
  Rational& operator()(std::size_t i, std::size_t j) { return entries_[i][j]; }
  const std::vector<Parity>& parities() const { return parities_; }

  bool is_zero() const {
    for (auto& row : entries_)
      for (auto& v : row)
        if (v != 0) return false;
    return true;
  }

  /// Parity of a homogeneous matrix; nullopt when it mixes parities. The zero
  /// matrix reports even.
  std::optional<Parity> parity() const {
    std::optional<Parity> p;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) {
        if (entries_[i][j] == 0) continue;
        Parity q = parities_[i] + parities_[j];
        if (p && *p != q) return std::nullopt;
        p = q;
      }
    return p.value_or(Parity::even);
  }

  friend SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b) {
    a.require_compatible(b);
    SuperMatrix out = zero(a.parities_);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (a.entries_[i][k] == 0) continue;
        for (std::size_t j = 0; j < a.size(); ++j) out.entries_[i][j] += a.entries_[i][k] * b.entries_[k][j];
      }
    return out;
  }
  friend SuperMatrix operator+(SuperMatrix a, const SuperMatrix& b) {
    a.require_compatible(b);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) a.entries_[i][j] += b.entries_[i][j];
    return a;
  }
  friend SuperMatrix operator*(const Rational& s, SuperMatrix a) {
    for (auto& row : a.entries_)
      for (auto& v : row) v *= s;
    return a;
  }
  friend SuperMatrix operator-(const SuperMatrix& a, const SuperMatrix& b) { return a + Rational(-1) * b; }
  friend bool operator==(const SuperMatrix& a, const SuperMatrix& b) {
    return a.entries_ == b.entries_ && a.parities_ == b.parities_;
  }

  void require_compatible(const SuperMatrix& o) const {
    if (size() != o.size() || parities_ != o.parities_)
      throw DomainError("supermatrices differ in size or parity vector");
  }

  /// Aligned text, one row per line.
  std::string to_string() const {
    std::vector<std::vector<std::string>> cells(size());
    std::size_t width = 1;
    for (std::size_t i = 0; i < size(); ++i)
      for (auto& v : entries_[i]) {
        cells[i].push_back(v.get_str());
        width = std::max(width, cells[i].back().size());
      }
    std::string out;
    for (auto& row : cells) {
      out += "[";
      for (std::size_t j = 0; j < row.size(); ++j)
        out += std::string(width - row[j].size() + (j ? 1 : 0), ' ') + row[j];
      out += "]\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<Rational>> entries_;
  std::vector<Parity> parities_;
};

inline Parity homogeneous_parity(const SuperMatrix& X) {
  auto p = X.parity();
  if (!p) throw DomainError("supermatrix is not homogeneous");
  return *p;
}

/// [X, Y] = XY - (-1)^{p(X)p(Y)} YX.
inline SuperMatrix supercommutator(const SuperMatrix& X, const SuperMatrix& Y) {
  X.require_compatible(Y);
  int s = koszul_sign(homogeneous_parity(X), homogeneous_parity(Y));
  return X * Y - Rational(s) * (Y * X);
}

inline Rational supertrace(const SuperMatrix& X) {
  Rational t = 0;
  for (std::size_t i = 0; i < X.size(); ++i) t += X.parities()[i] == Parity::odd ? -X(i, i) : X(i, i);
  return t;
}

struct NamedMatrix {
  std::string name;
  SuperMatrix matrix;
};

/// Linear combination of basis elements by index, ascending, nonzero coefficients.
using Combination = std::vector<std::pair<std::size_t, Rational>>;

/// All pairwise graded brackets of a basis, expanded in that basis.
class BracketTable {
 public:
  BracketTable(std::vector<std::string> names, std::vector<Parity> parities,
               std::map<std::pair<std::size_t, std::size_t>, Combination> table)
      : names_(std::move(names)), parities_(std::move(parities)), table_(std::move(table)) {}

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Parity>& parities() const { return parities_; }
  std::size_t size() const { return names_.size(); }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    throw DomainError("unknown generator '" + name + "'");
  }
  const Combination& bracket(std::size_t i, std::size_t j) const { return table_.at({i, j}); }
  const Combination& bracket(const std::string& a, const std::string& b) const {
    return bracket(index_of(a), index_of(b));
  }

  std::string render_combination(const Combination& c) const {
    if (c.empty()) return "0";
    std::string out;
    for (auto& [k, v] : c) {
      Rational mag = abs(v);
      std::string term = mag == 1 ? names_[k] : mag.get_str() + "*" + names_[k];
      if (out.empty())
        out = v < 0 ? "-" + term : term;
      else
        out += (v < 0 ? " - " : " + ") + term;
    }
    return out;
  }

  /// One line per ordered pair i <= j: "[A, B] = ..." ("{A, B}" when both odd).
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i; j < size(); ++j) {
        bool anti = parities_[i] == Parity::odd && parities_[j] == Parity::odd;
        out += std::string(anti ? "{" : "[") + names_[i] + ", " + names_[j] + (anti ? "}" : "]") + " = " +
               render_combination(bracket(i, j)) + "\n";
      }
    return out;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Parity> parities_;
  std::map<std::pair<std::size_t, std::size_t>, Combination> table_;
};

namespace detail {

// Coordinates of target in the span of basis; nullopt if outside.
inline std::optional<Combination> expand_in_basis(const std::vector<NamedMatrix>& basis,
                                                  const SuperMatrix& target) {
  const std::size_t n = target.size();
  const std::size_t rows = n * n;
  const std::size_t cols = basis.size();
  // Augmented system [B | t] with one column per basis element.
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = basis[c].matrix(r / n, r % n);
    a[r][cols] = target(r / n, r % n);
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) throw DomainError("basis matrices are linearly dependent");
    std::swap(a[p], a[row]);
    Rational inv = 1 / a[row][c];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = 0; k <= cols; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r)
    if (a[r][cols] != 0) return std::nullopt;
  Combination out;
  for (std::size_t k = 0; k < pivot_col.size(); ++k)
    if (a[k][cols] != 0) out.emplace_back(pivot_col[k], a[k][cols]);
  return out;
}

}  // namespace detail

inline BracketTable bracket_table(const std::vector<NamedMatrix>& basis) {
  if (basis.empty()) throw DomainError("empty basis");
  std::vector<std::string> names;
  std::vector<Parity> parities;
  for (auto& b : basis) {
    b.matrix.require_compatible(basis.front().matrix);
    names.push_back(b.name);
    parities.push_back(homogeneous_parity(b.matrix));
  }
  std::map<std::pair<std::size_t, std::size_t>, Combination> table;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      SuperMatrix v = supercommutator(basis[i].matrix, basis[j].matrix);
      auto c = detail::expand_in_basis(basis, v);
      if (!c)
        throw DomainError("bracket [" + names[i] + ", " + names[j] + "] is outside the span of the basis");
      table.emplace(std::pair{i, j}, std::move(*c));
    }
  return BracketTable(std::move(names), std::move(parities), std::move(table));
}

/// X-, H, X+ of sl(2) as 2x2 matrices.
inline std::vector<NamedMatrix> sl2_basis() {
  std::vector<Parity> p{Parity::even, Parity::even};
  auto m = [&](std::vector<std::vector<Rational>> e) { return SuperMatrix(std::move(e), p); };
  return {
      {"X-", m({{0, 0}, {1, 0}})},
      {"H", m({{1, 0}, {0, -1}})},
      {"X+", m({{0, 1}, {0, 0}})},
  };
}

/// X-, H, X+, delta-, delta+ of osp(1|2) as 3x3 supermatrices with the middle
/// row odd.
inline std::vector<NamedMatrix> osp12_basis() {
  std::vector<Parity> p{Parity::even, Parity::odd, Parity::even};
  auto m = [&](std::vector<std::vector<Rational>> e) { return SuperMatrix(std::move(e), p); };
  return {
      {"X-", m({{0, 0, 0}, {0, 0, 0}, {1, 0, 0}})},
      {"H", m({{1, 0, 0}, {0, 0, 0}, {0, 0, -1}})},
      {"X+", m({{0, 0, 1}, {0, 0, 0}, {0, 0, 0}})},
      {"delta-", m({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}})},
      {"delta+", m({{0, 1, 0}, {0, 0, -1}, {0, 0, 0}})},
  };
}

/// Chevalley generators H_i = E_ii - E_{i+1,i+1}, X_i^+ = E_{i,i+1},
/// X_i^- = E_{i+1,i} of sl(N), listed as H1.., X1+.., X1-..
inline std::vector<NamedMatrix> sl_chevalley_basis(std::size_t N) {
  if (N < 2) throw DomainError("sl(N) needs N >= 2");
  std::vector<Parity> p(N, Parity::even);
  auto unit = [&](std::size_t i, std::size_t j) {
    SuperMatrix m = SuperMatrix::zero(p);
    m(i, j) = 1;
    return m;
  };
  std::vector<NamedMatrix> out;
  for (std::size_t i = 0; i + 1 < N; ++i) out.push_back({"H" + std::to_string(i + 1), unit(i, i) - unit(i + 1, i + 1)});
  for (std::size_t i = 0; i + 1 < N; ++i) out.push_back({"X" + std::to_string(i + 1) + "+", unit(i, i + 1)});
  for (std::size_t i = 0; i + 1 < N; ++i) out.push_back({"X" + std::to_string(i + 1) + "-", unit(i + 1, i)});
  return out;
}

}  // namespace zcurv
