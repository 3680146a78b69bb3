#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "zcurv/cartan_io.hpp"
#include "zcurv/derive.hpp"
#include "zcurv/expr_parser.hpp"
#include "zcurv/json_reader.hpp"
#include "zcurv/numerics.hpp"
#include "zcurv/solutions.hpp"

namespace zcurv::cli {

// exit statuses
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kInput = 3;

/// File or format problem; exits with kInput.
struct InputError : Error {
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
auto parsing(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline CartanMatrix load_cartan(const std::string& path) {
  std::string text = read_file(path);
  return parsing(path, [&] { return parse_cartan(text); });
}

/// Jet order from ZCURV_ORDER, else the default.
inline int default_order() {
  const char* env = std::getenv("ZCURV_ORDER");
  if (!env || !*env) return kDefaultOrder;
  char* end = nullptr;
  long k = std::strtol(env, &end, 10);
  if (*end != '\0' || k < 2 || k > 64) throw CLI::ValidationError("ZCURV_ORDER", "must be an integer from 2 to 64");
  return static_cast<int>(k);
}

inline std::pair<Rational, Rational> parse_base(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--base", "expected x0,y0");
  try {
    return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
  } catch (const ParseError& e) {
    throw CLI::ValidationError("--base", e.what());
  }
}

/// Largest coefficient magnitude, exact when rational.
inline std::string max_coefficient(const std::vector<Jet<Number>>& jets) {
  Rational exact = 0;
  double approx = 0;
  bool transcendental = false;
  for (auto& u : jets)
    for (int d = 0; d <= u.order(); ++d)
      for (int j = 0; j <= d; ++j) {
        const Number& c = u.coeff(d - j, j);
        if (c.is_zero()) continue;
        if (c.is_rational()) {
          exact = std::max(exact, Rational(abs(c.to_rational())));
        } else {
          transcendental = true;
          approx = std::max(approx, std::abs(c.to_double()));
        }
      }
  if (!transcendental) return exact.get_str();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::max(approx, exact.get_d()));
  return buf;
}

inline bool all_zero(const std::vector<Jet<Number>>& jets) {
  for (auto& u : jets)
    if (!u.is_zero()) return false;
  return true;
}

inline Rational json_rational(const json::Value& v) {
  if (v.kind != json::Value::Kind::number && v.kind != json::Value::Kind::string)
    json::fail_at(v.at, "expected a rational number");
  try {
    return parse_rational(v.text);
  } catch (const ParseError&) {
    json::fail_at(v.at, "expected a rational number");
  }
}

inline ExprPtr json_expression(const json::Value& v) {
  if (v.kind != json::Value::Kind::string) json::fail_at(v.at, "expected an expression string");
  try {
    return parse_expression(v.text);
  } catch (const ParseError& e) {
    json::fail_at(v.at, e.what());
  }
}

inline void reject_unknown(const json::Value& obj, std::initializer_list<std::string_view> keys) {
  for (auto& [k, v] : obj.members) {
    bool ok = false;
    for (auto key : keys) ok = ok || k == key;
    if (!ok) json::fail_at(v.at, "unknown key \"" + k + "\"");
  }
}

// Solution document: {"base": [x0, y0], "order": K, "components": ["expr", ...]}
struct SolutionDoc {
  Rational x0 = 0, y0 = 0;
  std::optional<int> order;
  std::vector<ExprPtr> components;
};

inline SolutionDoc parse_solution(std::string_view text) {
  json::Value doc = json::parse(text);
  if (doc.kind != json::Value::Kind::object) json::fail_at(doc.at, "expected a top-level object");
  reject_unknown(doc, {"base", "order", "components"});
  SolutionDoc out;
  if (const json::Value* b = doc.find("base")) {
    if (b->kind != json::Value::Kind::array || b->items.size() != 2) json::fail_at(b->at, "\"base\" must be [x0, y0]");
    out.x0 = json_rational(b->items[0]);
    out.y0 = json_rational(b->items[1]);
  }
  if (const json::Value* k = doc.find("order")) {
    Rational r = json_rational(*k);
    if (!is_integer(r) || r < 2 || r > 64) json::fail_at(k->at, "\"order\" must be an integer >= 2");
    out.order = static_cast<int>(r.get_num().get_si());
  }
  const json::Value* c = doc.find("components");
  if (!c) json::fail_at(doc.at, "missing required key \"components\"");
  if (c->kind != json::Value::Kind::array || c->items.empty())
    json::fail_at(c->at, "\"components\" must be a non-empty array");
  for (auto& e : c->items) out.components.push_back(json_expression(e));
  return out;
}

// Boundary document:
//   {"x0": 0, "y0": 0, "x1": 1, "y1": 1,
//    "components": [{"exact": "expr"} | {"along_x": "expr", "along_y": "expr"}, ...]}
struct BoundaryDoc {
  Rational x0, y0, x1, y1;
  std::vector<ExprPtr> along_x, along_y, exact;  // exact entries may be null
};

inline BoundaryDoc parse_boundary(std::string_view text) {
  json::Value doc = json::parse(text);
  if (doc.kind != json::Value::Kind::object) json::fail_at(doc.at, "expected a top-level object");
  reject_unknown(doc, {"x0", "y0", "x1", "y1", "components"});
  BoundaryDoc out;
  auto num = [&](const char* key) {
    const json::Value* v = doc.find(key);
    if (!v) json::fail_at(doc.at, std::string("missing required key \"") + key + "\"");
    return json_rational(*v);
  };
  out.x0 = num("x0"), out.y0 = num("y0"), out.x1 = num("x1"), out.y1 = num("y1");
  const json::Value* c = doc.find("components");
  if (!c) json::fail_at(doc.at, "missing required key \"components\"");
  if (c->kind != json::Value::Kind::array || c->items.empty())
    json::fail_at(c->at, "\"components\" must be a non-empty array");
  for (auto& e : c->items) {
    if (e.kind != json::Value::Kind::object) json::fail_at(e.at, "component must be an object");
    reject_unknown(e, {"exact", "along_x", "along_y"});
    const json::Value* ex = e.find("exact");
    const json::Value* ax = e.find("along_x");
    const json::Value* ay = e.find("along_y");
    if (ex && !ax && !ay) {
      ExprPtr p = json_expression(*ex);
      out.exact.push_back(p), out.along_x.push_back(p), out.along_y.push_back(p);
    } else if (!ex && ax && ay) {
      out.exact.push_back(nullptr);
      out.along_x.push_back(json_expression(*ax));
      out.along_y.push_back(json_expression(*ay));
    } else {
      json::fail_at(e.at, "component needs either \"exact\" or both \"along_x\" and \"along_y\"");
    }
  }
  return out;
}

inline TodaForm parse_form(const std::string& s) { return s == "ls" ? TodaForm::LS : TodaForm::LSbis; }

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-curvature derivation and verification of Toda-type systems", "zcurv"};
  app.require_subcommand(1, 1);

  std::string cartan_path, form = "lsbis", scheme, algebra, f_expr, g_expr, base = "0,0";
  std::string solution_path, boundary_path, out_path, h_text, midpoint = "diagonal";
  int order = 0;
  unsigned threads = 1;

  auto* derive = app.add_subcommand("derive", "print the zero-curvature system of a Cartan matrix");
  derive->add_option("--cartan", cartan_path, "Cartan-matrix file")->required();
  derive->add_option("--form", form, "ls | lsbis")->check(CLI::IsMember({"ls", "lsbis"}));

  auto* super = app.add_subcommand("derive-super", "print the reduced super zero-curvature system");
  auto* obstruction = app.add_subcommand("obstruction", "print the non-reduced obstruction");

  auto* admissible = app.add_subcommand("admissible", "check the diagonal condition of a scheme");
  admissible->add_option("--cartan", cartan_path, "Cartan-matrix file")->required();
  admissible->add_option("--scheme", scheme, "lse1 | lse2")->required()->check(CLI::IsMember({"lse1", "lse2"}));

  auto* vliou = app.add_subcommand("verify-liouville", "check the general Liouville solution for given f, g");
  vliou->add_option("--f", f_expr, "f(x)")->required();
  vliou->add_option("--g", g_expr, "g(y)")->required();
  vliou->add_option("--order", order, "jet order K")->check(CLI::Range(2, 64));
  vliou->add_option("--base", base, "expansion point x0,y0");

  auto* vlse = app.add_subcommand("verify-lse", "residuals of a solution vector");
  vlse->add_option("--cartan", cartan_path, "Cartan-matrix file")->required();
  vlse->add_option("--solution", solution_path, "solution file")->required();
  vlse->add_option("--form", form, "ls | lsbis")->check(CLI::IsMember({"ls", "lsbis"}));

  auto* solve = app.add_subcommand("solve", "integrate the Goursat problem on a grid");
  solve->set_help_flag("--help", "Print this help message and exit");
  solve->add_option("--cartan", cartan_path, "Cartan-matrix file")->required();
  solve->add_option("--boundary", boundary_path, "boundary file")->required();
  solve->add_option("--h", h_text, "step, e.g. 1/64")->required();
  solve->add_option("--out", out_path, "CSV output path")->required();
  solve->add_option("--form", form, "ls | lsbis")->check(CLI::IsMember({"ls", "lsbis"}));
  solve->add_option("--threads", threads, "worker threads (0 = hardware)");
  solve->add_option("--midpoint", midpoint, "diagonal | corners")->check(CLI::IsMember({"diagonal", "corners"}));

  auto* brackets = app.add_subcommand("bracket-table", "print a bracket table from the matrix basis");
  brackets->add_option("--algebra", algebra, "sl2 | osp12")->required()->check(CLI::IsMember({"sl2", "osp12"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (derive->parsed()) {
      out << derive_toda(load_cartan(cartan_path), parse_form(form)).render();
      return kOk;
    }
    if (super->parsed()) {
      DerivedSystem s = derive_super_liouville();
      out << s.render();
      bool ok = check_super_elimination(s);
      out << "elimination check: " << (ok ? "passed" : "FAILED") << "\n";
      return ok ? kOk : kFailed;
    }
    if (obstruction->parsed()) {
      out << nonreduced_obstruction().render();
      return kOk;
    }
    if (admissible->parsed()) {
      CartanMatrix A = load_cartan(cartan_path);
      AdmissibilityReport r = check_admissible(A, scheme == "lse1" ? Scheme::LSE1 : Scheme::LSE2);
      out << "scheme: " << to_string(r.scheme) << "\n";
      out << (r.admissible ? "admissible" : "not admissible") << "\n";
      if (!r.admissible) {
        out << "offending diagonal indices:";
        for (auto i : r.offending_indices) out << " " << i;
        out << "\n";
      }
      return r.admissible ? kOk : kFailed;
    }
    if (vliou->parsed()) {
      const int K = order ? order : default_order();
      auto [x0, y0] = parse_base(base);
      ExprPtr f = parse_expression(f_expr), g = parse_expression(g_expr);
      if (f->depends_on_y()) throw DomainError("f must not depend on y");
      if (g->depends_on_x()) throw DomainError("g must not depend on x");
      // one order deeper so f' and g' are exact through order K
      JetShape deep{x0, y0, K + 1};
      Jet<Number> F = liouville_solution(to_jet<Number>(*f, deep), to_jet<Number>(*g, deep));
      Jet<Number> Fk(JetShape{x0, y0, K});
      for (int d = 0; d <= K; ++d)
        for (int j = 0; j <= d; ++j) Fk.set(d - j, j, F.coeff(d - j, j));
      Jet<Number> r = liouville_residual(Fk);
      out << "order: " << K << "\n";
      out << "F = " << Fk.to_string() << "\n";
      out << "residual checked through total degree " << K - 2 << "\n";
      out << "max residual coefficient: " << max_coefficient({r}) << "\n";
      return r.is_zero() ? kOk : kFailed;
    }
    if (vlse->parsed()) {
      CartanMatrix A = load_cartan(cartan_path);
      std::string text = read_file(solution_path);
      SolutionDoc doc = parsing(solution_path, [&] { return parse_solution(text); });
      if (doc.components.size() != A.rank())
        throw InputError(solution_path + ": " + std::to_string(doc.components.size()) +
                         " components for a rank " + std::to_string(A.rank()) + " matrix");
      const int K = doc.order.value_or(default_order());
      std::vector<Jet<Number>> Fs;
      for (auto& c : doc.components) Fs.push_back(to_jet<Number>(*c, JetShape{doc.x0, doc.y0, K}));
      auto res = lse_residual(A, Fs, parse_form(form));
      out << "form: " << form << "\n";
      out << "order: " << K << ", residual checked through total degree " << K - 2 << "\n";
      for (std::size_t i = 0; i < res.size(); ++i)
        out << "component " << i + 1 << ": max residual coefficient " << max_coefficient({res[i]}) << "\n";
      bool ok = all_zero(res);
      out << (ok ? "residual: zero" : "residual: NONZERO") << "\n";
      return ok ? kOk : kFailed;
    }
    if (solve->parsed()) {
      CartanMatrix A = load_cartan(cartan_path);
      std::string text = read_file(boundary_path);
      BoundaryDoc doc = parsing(boundary_path, [&] { return parse_boundary(text); });
      Rational h;
      try {
        h = parse_rational(h_text);
      } catch (const ParseError& e) {
        throw CLI::ValidationError("--h", e.what());
      }
      const double x0 = doc.x0.get_d(), y0 = doc.y0.get_d();
      GoursatData data{doc.x0, doc.y0, doc.x1, doc.y1, doc.along_x.size(),
                       [&](double x) {
                         std::vector<double> v;
                         for (auto& e : doc.along_x) v.push_back(evaluate(*e, x, y0));
                         return v;
                       },
                       [&](double y) {
                         std::vector<double> v;
                         for (auto& e : doc.along_y) v.push_back(evaluate(*e, x0, y));
                         return v;
                       }};
      GoursatOptions opt;
      opt.form = parse_form(form);
      opt.threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
      opt.midpoint = midpoint == "corners" ? Midpoint::corners : Midpoint::diagonal;
      Grid g = solve_goursat(A, data, h, opt);
      std::ofstream csv(out_path, std::ios::binary);
      if (!csv) throw InputError(out_path + ": cannot write file");
      write_csv(g, csv);
      char buf[64];
      out << "grid: " << g.mx() + 1 << " x " << g.my() + 1 << " points, h = " << h.get_str() << "\n";
      std::snprintf(buf, sizeof buf, "%.6e", residual_grid(A, g, opt.form));
      out << "discrete residual: " << buf << "\n";
      std::snprintf(buf, sizeof buf, "%.6e", g.corrector_change);
      out << "corrector change: " << buf << "\n";
      bool have_exact = true;
      for (auto& e : doc.exact) have_exact = have_exact && e;
      if (have_exact) {
        double errv = max_error(g, [&](double x, double y) {
          std::vector<double> v;
          for (auto& e : doc.exact) v.push_back(evaluate(*e, x, y));
          return v;
        });
        std::snprintf(buf, sizeof buf, "%.6e", errv);
        out << "max error vs exact: " << buf << "\n";
      }
      out << "wrote " << out_path << "\n";
      return kOk;
    }
    if (brackets->parsed()) {
      out << bracket_table(algebra == "sl2" ? sl2_basis() : osp12_basis()).to_string();
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

}  // namespace zcurv::cli
