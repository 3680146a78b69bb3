// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "support.hpp"
#include "zcurv/connection.hpp"
#include "zcurv/derive.hpp"
#include "zcurv/numerics.hpp"
#include "zcurv/solutions.hpp"
#include "zcurv/supermatrix.hpp"
#include "zcurv_cli.hpp"

using namespace zcurv;
using zt::shape;

using J = Jet<Number>;
using SF = SuperField<Number>;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> info;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(ZCURV_GOLDEN_DIR) + "/" + name, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::pair<int, std::string> cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "zcurv");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

J random_map_x(const JetShape& s, const Rational& value, zt::Rng& rng) {
  J u = zt::random_x_jet(s, rng);
  u.set(0, 0, Number(value));
  u.set(1, 0, Number(zt::nonzero_rational(rng)));
  return u;
}

J random_map_y(const JetShape& s, const Rational& value, zt::Rng& rng) {
  J u = zt::random_y_jet(s, rng);
  u.set(0, 0, Number(value));
  u.set(0, 1, Number(zt::nonzero_rational(rng)));
  return u;
}

Outcome derivation_fidelity() {
  Outcome o;
  auto t0 = Clock::now();
  auto [code, out] = cli_run({"derive", "--cartan", std::string(ZCURV_DATA_DIR) + "/sl2.cm", "--form", "lsbis"});
  double t = seconds_since(t0);
  o.require(code == 0, "derive exited nonzero");
  o.require(out == golden("derive_sl2_lsbis.txt"), "output differs from golden file");
  o.require(out.find("A_x - a_y = -b*B\nB_x = 2*a*B\nb_y = -2*b*A\n") != std::string::npos,
            "intermediate system missing");
  o.require(out.find("\nG_xy = 2*exp(G)\n") != std::string::npos, "final equation missing");
  o.require(t < 1.0, "runtime " + fmt("%.3f s", t));
  if (o.pass) o.detail = "golden match, " + fmt("%.3f s", t);
  return o;
}

Outcome super_derivation() {
  Outcome o;
  auto t0 = Clock::now();
  DerivedSystem sys = derive_super_liouville();
  auto [code, out] = cli_run({"derive-super"});
  double t = seconds_since(t0);
  o.require(code == 0, "derive-super exited nonzero");
  o.require(out == golden("derive_super.txt"), "output differs from golden file");
  o.require(sys.first_order.size() == 3, "expected three first-order equations");
  o.require(sys.second_order.size() == 1 && sys.second_order[0].to_string() ==
                                                 (sys.sign > 0 ? "D+D-(F) = exp(F)" : "D+D-(F) = -exp(F)"),
            "eliminated equation");
  o.require(out.find("sign: ") != std::string::npos, "sign notes missing");
  o.require(check_super_elimination(sys), "elimination check failed");
  o.require(t < 1.0, "runtime " + fmt("%.3f s", t));
  if (o.pass) o.detail = "3 first-order equations, D+D-(F) = " + std::string(sys.sign > 0 ? "" : "-") + "exp(F), " +
                         fmt("%.3f s", t);
  return o;
}

Outcome obstruction() {
  Outcome o;
  ObstructionReport r = nonreduced_obstruction();
  o.require(r.plus.derivations == std::map<Direction, Rational>{{Direction::x, Rational(1)}}, "symbolic d_x");
  o.require(r.minus.derivations == std::map<Direction, Rational>{{Direction::y, Rational(1)}}, "symbolic d_y");
  zt::Rng rng(3);
  auto alg = osp12_algebra();
  auto s = shape(4);
  for (int trial = 0; trial < 100; ++trial) {
    SF alpha = zt::random_superfield(s, 2, Parity::odd, rng), a = zt::random_superfield(s, 2, Parity::even, rng);
    SF beta = zt::random_superfield(s, 2, Parity::odd, rng), b = zt::random_superfield(s, 2, Parity::even, rng);
    auto [np, nm] = reduced_connection<SF>(alg, alpha, a, beta, b);
    o.require(half_square(np).derivations == std::map<Direction, Rational>{{Direction::x, Rational(1)}},
              "d_x coefficient in trial " + std::to_string(trial));
    o.require(half_square(nm).derivations == std::map<Direction, Rational>{{Direction::y, Rational(1)}},
              "d_y coefficient in trial " + std::to_string(trial));
  }
  if (o.pass) o.detail = "coefficient 1 on d_x and d_y, symbolic + 100 random";
  return o;
}

Outcome liouville_generality() {
  Outcome o;
  zt::Rng rng(4);
  auto t0 = Clock::now();
  const int K = 8;
  for (int trial = 0; trial < 50; ++trial) {
    auto s = shape(K, zt::small_rational(rng, 2, 2), zt::small_rational(rng, 2, 2));
    J f = random_map_x(s, zt::nonzero_rational(rng), rng);
    J g = random_map_y(s, zt::small_rational(rng), rng);
    if ((f + g).constant_term().is_zero()) g.set(0, 0, Number(1) - f.constant_term());
    J r = liouville_residual(liouville_solution(f, g));
    o.require(r.truncated(K - 2).is_zero(), "nonzero residual in trial " + std::to_string(trial));
  }
  double t = seconds_since(t0);
  o.require(t < 10.0, "runtime " + fmt("%.2f s", t));
  if (o.pass) o.detail = "50 pairs, K = 8, residual 0 through order 6, " + fmt("%.2f s", t);
  return o;
}

Outcome intertwining() {
  Outcome o;
  zt::Rng rng(5);
  auto s = shape(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + trial % 4;
    std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n));
    for (auto& row : e)
      for (auto& v : row) v = zt::small_rational(rng, 3, 2);
    CartanMatrix A(e);
    std::vector<J> F;
    for (std::size_t i = 0; i < n; ++i) F.push_back(zt::random_jet(s, rng, 0.5));
    auto lhs = lse_residual(A, transform_GF(A, F), TodaForm::LSbis);
    auto rhs = transform_GF(A, lse_residual(A, F, TodaForm::LS));
    o.require(lhs == rhs, "mismatch in trial " + std::to_string(trial));
  }
  if (o.pass) o.detail = "50 trials, rank 1..4";
  return o;
}

Outcome operator_identities() {
  Outcome o;
  zt::Rng rng(6);
  auto s = shape(4);
  for (int trial = 0; trial < 100; ++trial) {
    Parity pu = trial % 2 ? Parity::odd : Parity::even;
    Parity pv = trial % 3 ? Parity::even : Parity::odd;
    SF u = zt::random_superfield(s, 2, pu, rng), v = zt::random_superfield(s, 2, pv, rng);
    const std::string at = " in trial " + std::to_string(trial);
    o.require(d_plus(d_plus(u)) == u.d_x(), "(D+)^2 = d_x" + at);
    o.require(d_minus(d_minus(u)) == u.d_y(), "(D-)^2 = d_y" + at);
    o.require((d_plus(d_minus(u)) + d_minus(d_plus(u))).is_zero(), "{D+, D-} = 0" + at);
    Rational sign(pu == Parity::odd ? -1 : 1);
    o.require(d_plus(u * v).agrees_to(d_plus(u) * v + (u * d_plus(v)).scaled(sign), s.order - 1), "Leibniz D+" + at);
    o.require(d_minus(u * v).agrees_to(d_minus(u) * v + (u * d_minus(v)).scaled(sign), s.order - 1),
              "Leibniz D-" + at);
  }
  if (o.pass) o.detail = "100 random superfields, m = 2";
  return o;
}

Outcome bracket_oracles() {
  Outcome o;
  o.require(bracket_table(sl2_basis()).to_string() == golden("bracket_sl2.txt"), "sl2 table");
  o.require(bracket_table(osp12_basis()).to_string() == golden("bracket_osp12.txt"), "osp12 table");
  std::size_t triples = 0;
  for (auto basis : {sl2_basis(), osp12_basis()}) {
    BracketTable t = bracket_table(basis);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const SuperMatrix &X = basis[i].matrix, &Y = basis[j].matrix;
        SuperMatrix xy = supercommutator(X, Y);
        SuperMatrix from_table = SuperMatrix::zero(X.parities());
        for (auto& [k, r] : t.bracket(i, j)) from_table = from_table + r * basis[k].matrix;
        o.require(from_table == xy, "table entry [" + basis[i].name + ", " + basis[j].name + "]");
        o.require(supertrace(xy) == 0, "supertrace of [" + basis[i].name + ", " + basis[j].name + "]");
        int sxy = koszul_sign(homogeneous_parity(X), homogeneous_parity(Y));
        for (auto& [nz, Z] : basis) {
          SuperMatrix lhs = supercommutator(X, supercommutator(Y, Z));
          SuperMatrix rhs =
              supercommutator(xy, Z) + Rational(sxy) * supercommutator(Y, supercommutator(X, Z));
          o.require(lhs == rhs, "Jacobi on " + basis[i].name + ", " + basis[j].name + ", " + nz);
          ++triples;
        }
      }
  }
  if (o.pass) o.detail = "tables match, Jacobi on " + std::to_string(triples) + " triples";
  return o;
}

Outcome conformal_covariance() {
  Outcome o;
  zt::Rng rng(8);
  auto t0 = Clock::now();
  const int K = 8;
  for (int trial = 0; trial < 50; ++trial) {
    auto s0 = shape(K, 1, 2), s1 = shape(K, 0, 0), s2 = shape(K, 3, -1);
    J F = liouville_solution(random_map_x(s0, 3, rng), random_map_y(s0, 2, rng));
    J phi1 = random_map_x(s1, 1, rng), psi1 = random_map_y(s1, 2, rng);
    J phi2 = random_map_x(s2, 0, rng), psi2 = random_map_y(s2, 0, rng);
    J T1 = conformal_transform(F, phi1, psi1);
    J T12 = conformal_transform(T1, phi2, psi2);
    const std::string at = " in trial " + std::to_string(trial);
    o.require(liouville_residual(T1).is_zero(), "residual after one map" + at);
    o.require(liouville_residual(T12).is_zero(), "residual after two maps" + at);
    J direct = conformal_transform(F, compose(phi1, phi2, psi2), compose(psi1, phi2, psi2));
    // F is fixed up to i*pi (formal ln(-1) constants when phi' or psi' < 0); exp(2F) is not
    o.require(exp(direct.scaled(Rational(2))).agrees_to(exp(T12.scaled(Rational(2))), K - 2), "group law" + at);
    o.require(direct.d_x().agrees_to(T12.d_x(), K - 3) && direct.d_y().agrees_to(T12.d_y(), K - 3),
              "group law derivatives" + at);
  }
  if (o.pass) o.detail = "50 triples, group law through order 6, " + fmt("%.2f s", seconds_since(t0));
  return o;
}

Outcome numerics() {
  Outcome o;
  auto t0 = Clock::now();
  const CartanMatrix A({{Rational(2)}});
  auto exact = [](double x, double y) { return -std::log(x + y + 2); };
  GoursatData data{0, 0, 1, 1, 1, [&](double x) { return std::vector<double>{exact(x, 0)}; },
                   [&](double y) { return std::vector<double>{exact(0, y)}; }};
  auto exact_v = [&](double x, double y) { return std::vector<double>{exact(x, y)}; };
  // G = -ln(x+y+2) satisfies G_xy = exp(2G)
  GoursatOptions opt{TodaForm::LS};
  std::vector<std::pair<double, double>> samples;
  double e64 = 0;
  for (int m : {16, 32, 64, 128}) {
    double e = max_error(solve_goursat(A, data, Rational(1, m), opt), exact_v);
    if (m == 64) e64 = e;
    samples.push_back({1.0 / m, e});
  }
  double order = convergence_order(samples);
  Grid seq = solve_goursat(A, data, Rational(1, 128), opt);
  GoursatOptions par_opt = opt;
  par_opt.threads = 4;
  Grid par = solve_goursat(A, data, Rational(1, 128), par_opt);
  double t = seconds_since(t0);
  o.require(e64 <= 5e-4, "error at h = 1/64 is " + fmt("%.3e", e64));
  o.require(order >= 1.8 && order <= 2.2, "observed order " + fmt("%.3f", order));
  o.require(par.values() == seq.values(), "parallel run differs from sequential");
  o.require(t < 10.0, "runtime " + fmt("%.2f s", t));
  if (o.pass)
    o.detail = "error " + fmt("%.3e", e64) + " at h = 1/64, order " + fmt("%.3f", order) +
               ", parallel bitwise equal, " + fmt("%.2f s", t);

  GoursatOptions corners = opt;
  corners.midpoint = Midpoint::corners;
  std::vector<std::pair<double, double>> c;
  for (int m : {16, 32, 64}) c.push_back({1.0 / m, max_error(solve_goursat(A, data, Rational(1, m), corners), exact_v)});
  o.info.push_back("corners midpoint on this (Moebius) data: order " + fmt("%.2f", convergence_order(c)));
  return o;
}

Outcome admissibility() {
  Outcome o;
  const std::vector<int> diag{-1, 0, 1, 2, 3};
  auto in = [](int d, Scheme s) { return s == Scheme::LSE1 ? (d == 0 || d == 1) : (d == 1 || d == 2); };
  std::size_t cases = 0;
  for (Scheme s : {Scheme::LSE1, Scheme::LSE2}) {
    for (int d : diag) {
      o.require(check_admissible(CartanMatrix({{Rational(d)}}), s).admissible == in(d, s), "1x1 case");
      ++cases;
    }
    for (int d1 : diag)
      for (int d2 : diag)
        for (int off : {-1, 0}) {
          CartanMatrix A({{Rational(d1), Rational(off)}, {Rational(off), Rational(d2)}});
          auto r = check_admissible(A, s);
          o.require(r.admissible == (in(d1, s) && in(d2, s)), "2x2 case");
          std::vector<std::size_t> bad;
          if (!in(d1, s)) bad.push_back(0);
          if (!in(d2, s)) bad.push_back(1);
          o.require(r.offending_indices == bad, "offending indices");
          ++cases;
        }
  }
  const char* positive[] = {"sl(1|2)",  "sl(2|1)",  "sl(2|3)",  "sl(3|2)",  "sl(4|5)",  "sl(6|5)",   "osp(1|2)",
                            "osp(3|2)", "osp(2|2)", "osp(4|2)", "osp(3|4)", "osp(5|4)", "osp(4|4)",  "osp(6|4)",
                            "osp(5|6)", "osp(7|6)", "osp(6|6)", "osp(8|6)", "osp(9|8)", "osp_a(4|2)"};
  const char* negative[] = {"sl(2|2)",  "sl(1|3)",  "sl(3|5)",  "sl(4|4)",  "sl(1|1)",  "osp(1|4)", "osp(5|2)",
                            "osp(6|2)", "osp(2|4)", "osp(1|3)", "osp(3|3)", "osp(8|4)", "osp(2|6)", "osp(9|6)",
                            "osp(4|3)", "osp(1|1)", "osp(0|2)", "osp(11|8)", "osp_a(4|4)", "osp_a(2|2)"};
  for (auto d : positive) o.require(whitelist_superprincipal(d), std::string("expected admitted: ") + d);
  for (auto d : negative) o.require(!whitelist_superprincipal(d), std::string("expected rejected: ") + d);
  if (o.pass) o.detail = std::to_string(cases) + " matrices, 20 + 20 descriptors";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"derivation fidelity", derivation_fidelity},
      {"super derivation fidelity", super_derivation},
      {"obstruction", obstruction},
      {"Liouville generality", liouville_generality},
      {"LS/LSbis intertwining", intertwining},
      {"operator identities", operator_identities},
      {"bracket oracles", bracket_oracles},
      {"conformal covariance", conformal_covariance},
      {"numerics", numerics},
      {"admissibility", admissibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu (%s): %s: %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    for (auto& line : o.info) std::printf("  info: %s\n", line.c_str());
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
