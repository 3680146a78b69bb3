#pragma once

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cartan.hpp"
#include "derive.hpp"
#include "error.hpp"

namespace zcurv {

/// Characteristic data on the lines y = y0 (along_x) and x = x0 (along_y).
struct GoursatData {
  Rational x0, y0, x1, y1;
  std::size_t components = 1;
  std::function<std::vector<double>(double)> along_x;  // x -> G(x, y0)
  std::function<std::vector<double>(double)> along_y;  // y -> G(x0, y)
};

/// Centre estimate used by the corrector: the midpoint of the cell diagonal,
/// (G00 + G11)/2, or the four-corner average. Both are second order; the
/// four-corner form cancels the leading error for data with vanishing
/// Schwarzian (Moebius f, g) and then converges at fourth order.
enum class Midpoint { diagonal, corners };

struct GoursatOptions {
  TodaForm form = TodaForm::LSbis;
  unsigned threads = 1;
  Midpoint midpoint = Midpoint::diagonal;
};

class Grid {
 public:
  Grid(Rational x0, Rational y0, Rational h, std::size_t mx, std::size_t my, std::size_t n)
      : x0_(std::move(x0)), y0_(std::move(y0)), h_(std::move(h)), mx_(mx), my_(my), n_(n),
        values_((mx + 1) * (my + 1) * n, 0.0) {}

  const Rational& h() const { return h_; }
  std::size_t mx() const { return mx_; }
  std::size_t my() const { return my_; }
  std::size_t components() const { return n_; }
  double x(std::size_t i) const { return Rational(x0_ + h_ * static_cast<long>(i)).get_d(); }
  double y(std::size_t j) const { return Rational(y0_ + h_ * static_cast<long>(j)).get_d(); }

  double& at(std::size_t i, std::size_t j, std::size_t k) { return values_[(i * (my_ + 1) + j) * n_ + k]; }
  double at(std::size_t i, std::size_t j, std::size_t k) const { return values_[(i * (my_ + 1) + j) * n_ + k]; }
  const std::vector<double>& values() const { return values_; }

  /// Largest |G11 - predictor| over all cells; the corrector is applied once.
  double corrector_change = 0;

 private:
  Rational x0_, y0_, h_;
  std::size_t mx_, my_, n_;
  std::vector<double> values_;
};

namespace detail {

inline std::size_t steps(const Rational& from, const Rational& to, const Rational& h, const char* axis) {
  Rational m = (to - from) / h;
  if (m <= 0 || !is_integer(m))
    throw DomainError(std::string("the ") + axis + " range is not a positive multiple of h");
  return m.get_num().get_ui();
}

// RHS_i(G) for either form.
struct Rhs {
  std::vector<double> A;  // row-major
  std::size_t n;
  TodaForm form;

  void operator()(const double* G, double* out, std::vector<double>& scratch) const {
    if (form == TodaForm::LSbis) {
      for (std::size_t j = 0; j < n; ++j) scratch[j] = std::exp(G[j]);
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += A[i * n + j] * scratch[j];
        out[i] = s;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += A[i * n + j] * G[j];
        out[i] = std::exp(s);
      }
    }
  }
};

inline Rhs make_rhs(const CartanMatrix& A, TodaForm form) {
  Rhs r{{}, A.rank(), form};
  for (std::size_t i = 0; i < A.rank(); ++i)
    for (std::size_t j = 0; j < A.rank(); ++j) r.A.push_back(A(i, j).get_d());
  return r;
}

struct CellWork {
  std::vector<double> centre, rhs, predicted, scratch;
  explicit CellWork(std::size_t n) : centre(n), rhs(n), predicted(n), scratch(n) {}
};

inline double centre_value(Midpoint m, double g00, double g10, double g01, double g11) {
  return m == Midpoint::diagonal ? 0.5 * (g00 + g11) : 0.25 * (g00 + g10 + g01 + g11);
}

// One cell: predictor with the (G10 + G01)/2 centre estimate, then one
// corrector. Returns false on a non-finite value.
inline bool march_cell(Grid& g, const Rhs& rhs, Midpoint mid, double h2, std::size_t i, std::size_t j,
                       CellWork& w, double& change) {
  const std::size_t n = g.components();
  for (std::size_t k = 0; k < n; ++k) w.centre[k] = 0.5 * (g.at(i, j - 1, k) + g.at(i - 1, j, k));
  rhs(w.centre.data(), w.rhs.data(), w.scratch);
  for (std::size_t k = 0; k < n; ++k)
    w.predicted[k] = g.at(i, j - 1, k) + g.at(i - 1, j, k) - g.at(i - 1, j - 1, k) + h2 * w.rhs[k];
  for (std::size_t k = 0; k < n; ++k)
    w.centre[k] = centre_value(mid, g.at(i - 1, j - 1, k), g.at(i, j - 1, k), g.at(i - 1, j, k), w.predicted[k]);
  rhs(w.centre.data(), w.rhs.data(), w.scratch);
  bool ok = true;
  for (std::size_t k = 0; k < n; ++k) {
    double v = g.at(i, j - 1, k) + g.at(i - 1, j, k) - g.at(i - 1, j - 1, k) + h2 * w.rhs[k];
    if (!std::isfinite(v)) ok = false;
    change = std::max(change, std::abs(v - w.predicted[k]));
    g.at(i, j, k) = v;
  }
  return ok;
}

[[noreturn]] inline void overflow_at(const Grid& g, std::size_t i, std::size_t j) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "overflow at grid cell (%zu, %zu), x = %.17g, y = %.17g", i, j, g.x(i), g.y(j));
  throw NumericsError(buf);
}

}  // namespace detail

/// Marches G(x+h, y+h) = G(x+h, y) + G(x, y+h) - G(x, y) + h^2 RHS(centre)
/// across the grid. threads > 1 sweeps anti-diagonals concurrently; the
/// result is bitwise identical to the sequential sweep.
inline Grid solve_goursat(const CartanMatrix& A, const GoursatData& data, const Rational& h,
                          const GoursatOptions& opt = {}) {
  const TodaForm form = opt.form;
  const unsigned threads = opt.threads;
  if (!A.all_even()) throw DomainError("solve_goursat needs an all-even Cartan matrix");
  if (h <= 0) throw DomainError("step h must be positive");
  const std::size_t n = A.rank();
  if (data.components != n)
    throw DomainError("boundary data has " + std::to_string(data.components) + " components, expected " +
                      std::to_string(n));
  const std::size_t mx = detail::steps(data.x0, data.x1, h, "x");
  const std::size_t my = detail::steps(data.y0, data.y1, h, "y");
  Grid g(data.x0, data.y0, h, mx, my, n);

  auto load = [&](std::vector<double> v, const char* what) {
    if (v.size() != n) throw DomainError(std::string(what) + " returned the wrong number of components");
    return v;
  };
  std::vector<double> cx = load(data.along_x(g.x(0)), "along_x");
  std::vector<double> cy = load(data.along_y(g.y(0)), "along_y");
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(cx[k] - cy[k]) > 1e-12 * std::max(1.0, std::abs(cx[k])))
      throw DomainError("boundary traces disagree at the corner in component " + std::to_string(k + 1));
  for (std::size_t i = 0; i <= mx; ++i) {
    auto v = load(data.along_x(g.x(i)), "along_x");
    for (std::size_t k = 0; k < n; ++k) g.at(i, 0, k) = v[k];
  }
  for (std::size_t j = 1; j <= my; ++j) {
    auto v = load(data.along_y(g.y(j)), "along_y");
    for (std::size_t k = 0; k < n; ++k) g.at(0, j, k) = v[k];
  }
  for (std::size_t i = 0; i <= mx; ++i)
    for (std::size_t j = 0; j <= my; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!std::isfinite(g.at(i, j, k))) throw DomainError("non-finite boundary value");

  const detail::Rhs rhs = detail::make_rhs(A, form);
  const double h2 = h.get_d() * h.get_d();

  if (threads <= 1) {
    detail::CellWork w(n);
    double change = 0;
    for (std::size_t i = 1; i <= mx; ++i)
      for (std::size_t j = 1; j <= my; ++j)
        if (!detail::march_cell(g, rhs, opt.midpoint, h2, i, j, w, change)) detail::overflow_at(g, i, j);
    g.corrector_change = change;
    return g;
  }

  // cells with i + j = d depend only on diagonals d - 1 and d - 2
  std::atomic<bool> failed{false};
  bool stop = false;  // latched once per diagonal, so every worker leaves on the same one
  auto latch = [&]() noexcept { stop = failed.load(); };
  std::barrier sync(static_cast<std::ptrdiff_t>(threads), latch);
  std::mutex mu;
  std::size_t bad_d = std::numeric_limits<std::size_t>::max(), bad_i = 0;
  std::vector<double> change(threads, 0.0);
  auto worker = [&](unsigned t) {
    detail::CellWork w(n);
    for (std::size_t d = 2; d <= mx + my; ++d) {
      std::size_t lo = d > my ? d - my : 1;
      std::size_t hi = std::min(mx, d - 1);
      for (std::size_t i = lo + t; i <= hi; i += threads)
        if (!detail::march_cell(g, rhs, opt.midpoint, h2, i, d - i, w, change[t])) {
          std::lock_guard lock(mu);
          if (d < bad_d || (d == bad_d && i < bad_i)) bad_d = d, bad_i = i;
          failed = true;
        }
      sync.arrive_and_wait();
      if (stop) return;
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }
  if (failed) detail::overflow_at(g, bad_i, bad_d - bad_i);
  g.corrector_change = *std::max_element(change.begin(), change.end());
  return g;
}

/// max over interior points and components of
/// |(G(i+1,j+1) - G(i+1,j-1) - G(i-1,j+1) + G(i-1,j-1)) / 4h^2 - RHS(G(i,j))|.
inline double residual_grid(const CartanMatrix& A, const Grid& g, TodaForm form = TodaForm::LSbis) {
  const std::size_t n = g.components();
  if (n != A.rank()) throw DomainError("grid and Cartan matrix ranks differ");
  const detail::Rhs rhs = detail::make_rhs(A, form);
  const double h = g.h().get_d();
  std::vector<double> G(n), R(n), scratch(n);
  double worst = 0;
  for (std::size_t i = 1; i + 1 <= g.mx(); ++i)
    for (std::size_t j = 1; j + 1 <= g.my(); ++j) {
      for (std::size_t k = 0; k < n; ++k) G[k] = g.at(i, j, k);
      rhs(G.data(), R.data(), scratch);
      for (std::size_t k = 0; k < n; ++k) {
        double mixed = (g.at(i + 1, j + 1, k) - g.at(i + 1, j - 1, k) - g.at(i - 1, j + 1, k) + g.at(i - 1, j - 1, k)) /
                       (4 * h * h);
        worst = std::max(worst, std::abs(mixed - R[k]));
      }
    }
  return worst;
}

/// max over cells of |G11 - G10 - G01 + G00 - h^2 RHS(centre)| with the
/// final G11 in the centre estimate.
inline double four_point_defect(const CartanMatrix& A, const Grid& g, const GoursatOptions& opt = {}) {
  const TodaForm form = opt.form;
  const std::size_t n = g.components();
  const detail::Rhs rhs = detail::make_rhs(A, form);
  const double h2 = g.h().get_d() * g.h().get_d();
  std::vector<double> c(n), R(n), scratch(n);
  double worst = 0;
  for (std::size_t i = 1; i <= g.mx(); ++i)
    for (std::size_t j = 1; j <= g.my(); ++j) {
      for (std::size_t k = 0; k < n; ++k)
        c[k] = detail::centre_value(opt.midpoint, g.at(i - 1, j - 1, k), g.at(i, j - 1, k), g.at(i - 1, j, k),
                                    g.at(i, j, k));
      rhs(c.data(), R.data(), scratch);
      for (std::size_t k = 0; k < n; ++k)
        worst = std::max(worst, std::abs(g.at(i, j, k) - g.at(i, j - 1, k) - g.at(i - 1, j, k) +
                                         g.at(i - 1, j - 1, k) - h2 * R[k]));
    }
  return worst;
}

/// max |G - exact| over all grid points and components.
inline double max_error(const Grid& g, const std::function<std::vector<double>(double, double)>& exact) {
  double worst = 0;
  for (std::size_t i = 0; i <= g.mx(); ++i)
    for (std::size_t j = 0; j <= g.my(); ++j) {
      auto v = exact(g.x(i), g.y(j));
      for (std::size_t k = 0; k < g.components(); ++k) worst = std::max(worst, std::abs(g.at(i, j, k) - v[k]));
    }
  return worst;
}

/// Least-squares slope of log(error) against log(h).
inline double convergence_order(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw DomainError("convergence_order needs at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [h, e] : samples) {
    if (!(h > 0) || !(e > 0)) throw DomainError("convergence_order needs positive step sizes and errors");
    double lx = std::log(h), ly = std::log(e);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double m = static_cast<double>(samples.size());
  double den = m * sxx - sx * sx;
  if (den == 0) throw DomainError("convergence_order needs distinct step sizes");
  return (m * sxy - sx * sy) / den;
}

/// CSV with header x,y,G_1..G_n, x outer, 17 significant digits.
inline void write_csv(const Grid& g, std::ostream& os) {
  os << "x,y";
  for (std::size_t k = 0; k < g.components(); ++k) os << ",G_" << k + 1;
  os << "\n";
  char buf[40];
  for (std::size_t i = 0; i <= g.mx(); ++i)
    for (std::size_t j = 0; j <= g.my(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", g.x(i));
      os << buf;
      std::snprintf(buf, sizeof buf, ",%.17g", g.y(j));
      os << buf;
      for (std::size_t k = 0; k < g.components(); ++k) {
        std::snprintf(buf, sizeof buf, ",%.17g", g.at(i, j, k));
        os << buf;
      }
      os << "\n";
    }
}

}  // namespace zcurv
