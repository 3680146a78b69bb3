#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "parity.hpp"
#include "rational.hpp"

namespace zcurv {

/// Square rational matrix with one parity per node (row).
class CartanMatrix {
 public:
  CartanMatrix(std::vector<std::vector<Rational>> entries, std::vector<Parity> parities = {},
               std::optional<std::string> name = std::nullopt)
      : entries_(std::move(entries)), parities_(std::move(parities)), name_(std::move(name)) {
    const std::size_t n = entries_.size();
    if (n == 0) throw DomainError("Cartan matrix must have at least one row");
    for (auto& row : entries_)
      if (row.size() != n) throw DomainError("Cartan matrix must be square");
    if (parities_.empty()) parities_.assign(n, Parity::even);
    if (parities_.size() != n)
      throw DomainError("parity list has length " + std::to_string(parities_.size()) +
                        ", expected " + std::to_string(n));
  }

  std::size_t rank() const { return entries_.size(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i][j]; }
  const std::vector<std::vector<Rational>>& entries() const { return entries_; }
  const std::vector<Parity>& parities() const { return parities_; }
  const std::optional<std::string>& name() const { return name_; }

  bool all_even() const {
    for (auto p : parities_)
      if (p == Parity::odd) return false;
    return true;
  }

  /// Exact inverse, or nullopt when singular.
  std::optional<std::vector<std::vector<Rational>>> inverse() const {
    const std::size_t n = rank();
    std::vector<std::vector<Rational>> a = entries_;
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      while (pivot < n && a[pivot][col] == 0) ++pivot;
      if (pivot == n) return std::nullopt;
      std::swap(a[pivot], a[col]);
      std::swap(inv[pivot], inv[col]);
      Rational scale = 1 / a[col][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[col][j] *= scale;
        inv[col][j] *= scale;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || a[r][col] == 0) continue;
        Rational f = a[r][col];
        for (std::size_t j = 0; j < n; ++j) {
          a[r][j] -= f * a[col][j];
          inv[r][j] -= f * inv[col][j];
        }
      }
    }
    return inv;
  }

  friend bool operator==(const CartanMatrix& a, const CartanMatrix& b) {
    return a.entries_ == b.entries_ && a.parities_ == b.parities_ && a.name_ == b.name_;
  }

 private:
  std::vector<std::vector<Rational>> entries_;
  std::vector<Parity> parities_;
  std::optional<std::string> name_;
};

/// LSE1: the reduced super zero-curvature scheme (diagonal in {0, 1}).
/// LSE2: the scheme solvable by inverse scattering (diagonal in {2, 1}).
enum class Scheme { LSE1, LSE2 };

inline std::string to_string(Scheme s) { return s == Scheme::LSE1 ? "LSE1" : "LSE2"; }

struct AdmissibilityReport {
  Scheme scheme;
  bool admissible;
  std::vector<std::size_t> offending_indices;
};

inline AdmissibilityReport check_admissible(const CartanMatrix& A, Scheme scheme) {
  AdmissibilityReport report{scheme, true, {}};
  for (std::size_t i = 0; i < A.rank(); ++i) {
    const Rational& d = A(i, i);
    bool ok = scheme == Scheme::LSE1 ? (d == 0 || d == 1) : (d == 2 || d == 1);
    if (!ok) report.offending_indices.push_back(i);
  }
  report.admissible = report.offending_indices.empty();
  return report;
}

/// A Lie superalgebra family descriptor such as sl(2|3), osp(1|2), osp_a(4|2).
struct FamilyDescriptor {
  std::string family;  // "sl", "osp" or "osp_a"
  long m = 0;
  long n = 0;
};

inline FamilyDescriptor parse_family(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto fail = [&] { throw ParseError("unparseable family descriptor '" + std::string(text) + "'"); };
  auto open = s.find('(');
  auto bar = s.find('|');
  if (open == std::string::npos || bar == std::string::npos || bar < open || s.back() != ')') fail();
  FamilyDescriptor d;
  d.family = s.substr(0, open);
  if (d.family != "sl" && d.family != "osp" && d.family != "osp_a") fail();
  auto number = [&](const std::string& t) -> long {
    if (t.empty() || t.size() > 9) fail();
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    return std::stol(t);
  };
  d.m = number(s.substr(open + 1, bar - open - 1));
  d.n = number(s.substr(bar + 1, s.size() - bar - 2));
  return d;
}

/// Simple Lie superalgebras admitting a superprincipal osp(1|2): sl(n|n+-1),
/// osp(2n+-1|2n), osp(2n|2n), osp(2n+2|2n) and osp_a(4|2).
inline bool whitelist_superprincipal(const FamilyDescriptor& d) {
  if (d.family == "sl") return d.m >= 1 && d.n >= 1 && (d.m - d.n == 1 || d.n - d.m == 1);
  if (d.family == "osp") {
    if (d.n < 2 || d.n % 2 != 0) return false;
    long two_n = d.n;
    return d.m == two_n - 1 || d.m == two_n + 1 || d.m == two_n || d.m == two_n + 2;
  }
  return d.family == "osp_a" && d.m == 4 && d.n == 2;
}

inline bool whitelist_superprincipal(std::string_view descriptor) {
  return whitelist_superprincipal(parse_family(descriptor));
}

/// sl2 -> (2); osp12 -> (1) with an odd node; slN / sl_N -> the A_{N-1} matrix.
inline CartanMatrix standard_cartan(std::string_view name) {
  std::string s(name);
  if (s == "sl2") return CartanMatrix({{Rational(2)}}, {Parity::even}, s);
  if (s == "osp12") return CartanMatrix({{Rational(1)}}, {Parity::odd}, s);
  std::string digits;
  if (s.rfind("sl_", 0) == 0)
    digits = s.substr(3);
  else if (s.rfind("sl", 0) == 0)
    digits = s.substr(2);
  bool numeric = !digits.empty() && digits.size() <= 2;
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
  if (!numeric) throw DomainError("unknown standard Cartan matrix '" + s + "'");
  long N = std::stol(digits);
  if (N < 2) throw DomainError("sl_N needs N >= 2");
  std::size_t r = static_cast<std::size_t>(N - 1);
  std::vector<std::vector<Rational>> a(r, std::vector<Rational>(r));
  for (std::size_t i = 0; i < r; ++i) {
    a[i][i] = 2;
    if (i + 1 < r) a[i][i + 1] = a[i + 1][i] = -1;
  }
  return CartanMatrix(std::move(a), {}, "sl" + std::to_string(N));
}

}  // namespace zcurv
