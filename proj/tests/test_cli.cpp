#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zcurv_cli.hpp"

using namespace zcurv;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "zcurv");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ZCURV_DATA_DIR) + "/" + name; }

std::string golden(const std::string& name) {
  std::ifstream in(std::string(ZCURV_GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "zcurv_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_scratch(const std::string& name, const std::string& text) {
  auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

struct EnvOrder {
  explicit EnvOrder(const char* v) { setenv("ZCURV_ORDER", v, 1); }
  ~EnvOrder() { unsetenv("ZCURV_ORDER"); }
};

}  // namespace

TEST_CASE("golden: derive", "[cli]") {
  auto r = run({"derive", "--cartan", data("sl2.cm"), "--form", "lsbis"});
  CHECK(r.code == 0);
  CHECK(r.out == golden("derive_sl2_lsbis.txt"));
  CHECK(r.out.find("G_xy = 2*exp(G)\n") != std::string::npos);
  CHECK(r.out.find("A_x - a_y = -b*B\nB_x = 2*a*B\nb_y = -2*b*A\n") != std::string::npos);

  CHECK(run({"derive", "--cartan", data("sl2.cm"), "--form", "ls"}).out == golden("derive_sl2_ls.txt"));
  CHECK(run({"derive", "--cartan", data("sl3.cm"), "--form", "ls"}).out == golden("derive_sl3_ls.txt"));
  CHECK(run({"derive", "--cartan", data("sl3.cm"), "--form", "lsbis"}).out == golden("derive_sl3_lsbis.txt"));
  // lsbis is the default form
  CHECK(run({"derive", "--cartan", data("sl2.cm")}).out == golden("derive_sl2_lsbis.txt"));
}

TEST_CASE("golden: derive-super and obstruction", "[cli]") {
  auto r = run({"derive-super"});
  CHECK(r.code == 0);
  CHECK(r.out == golden("derive_super.txt"));
  CHECK(r.out.find("elimination check: passed") != std::string::npos);
  auto o = run({"obstruction"});
  CHECK(o.code == 0);
  CHECK(o.out == golden("obstruction.txt"));
}

TEST_CASE("golden: admissible", "[cli]") {
  auto ok = run({"admissible", "--cartan", data("osp12.cm"), "--scheme", "lse1"});
  CHECK(ok.code == 0);
  CHECK(ok.out == golden("admissible_osp12_lse1.txt"));
  auto bad = run({"admissible", "--cartan", data("sl3.cm"), "--scheme", "lse1"});
  CHECK(bad.code == 1);
  CHECK(bad.out == golden("admissible_sl3_lse1.txt"));
  CHECK(run({"admissible", "--cartan", data("sl2.cm"), "--scheme", "lse2"}).code == 0);
}

TEST_CASE("golden: verify-liouville and verify-lse", "[cli]") {
  auto r = run({"verify-liouville", "--f", "x+1", "--g", "y+1", "--order", "8"});
  CHECK(r.code == 0);
  CHECK(r.out == golden("verify_liouville.txt"));

  auto ls = run({"verify-lse", "--cartan", data("sl2.cm"), "--solution", data("liouville_solution.json"), "--form", "ls"});
  CHECK(ls.code == 0);
  CHECK(ls.out == golden("verify_lse_sl2_ls.txt"));
  auto bis =
      run({"verify-lse", "--cartan", data("sl2.cm"), "--solution", data("liouville_solution.json"), "--form", "lsbis"});
  CHECK(bis.code == 1);
  CHECK(bis.out == golden("verify_lse_sl2_lsbis.txt"));
}

TEST_CASE("golden: bracket-table", "[cli]") {
  CHECK(run({"bracket-table", "--algebra", "sl2"}).out == golden("bracket_sl2.txt"));
  CHECK(run({"bracket-table", "--algebra", "osp12"}).out == golden("bracket_osp12.txt"));
}

TEST_CASE("solve writes the grid", "[cli]") {
  auto out = scratch("grid.csv");
  auto r = run({"solve", "--cartan", data("sl2.cm"), "--boundary", data("liouville_boundary.json"), "--h", "1/32",
                "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("grid: 33 x 33 points, h = 1/32\n", 0) == 0);
  CHECK(r.out.find("max error vs exact: ") != std::string::npos);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,G_1");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 33 * 33);

  // byte-deterministic, also with threads
  std::ifstream a(out, std::ios::binary);
  std::string first((std::istreambuf_iterator<char>(a)), {});
  auto out2 = scratch("grid2.csv");
  auto r2 = run({"solve", "--cartan", data("sl2.cm"), "--boundary", data("liouville_boundary.json"), "--h", "1/32",
                 "--out", out2.string(), "--threads", "4"});
  REQUIRE(r2.code == 0);
  std::ifstream b(out2, std::ios::binary);
  std::string second((std::istreambuf_iterator<char>(b)), {});
  CHECK(first == second);

  auto along = write_scratch("along.json", R"j({"x0": 0, "y0": 0, "x1": 0.5, "y1": 0.5,
    "components": [{"along_x": "-2*ln(x+2)", "along_y": "-2*ln(y+2)"}]})j");
  auto r3 = run({"solve", "--cartan", data("sl2.cm"), "--boundary", along.string(), "--h", "1/8", "--out",
                 scratch("grid3.csv").string()});
  CHECK(r3.code == 0);
  CHECK(r3.out.find("max error") == std::string::npos);
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"derive", "--cartan", data("sl2.cm"), "--bogus"}).code == cli::kUsage);
  CHECK(run({"derive", "--cartan", data("sl2.cm"), "--form", "lsx"}).code == cli::kUsage);
  CHECK(run({"derive"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"solve", "--help"}).code == cli::kOk);

  CHECK(run({"derive", "--cartan", data("missing.cm")}).code == cli::kInput);
  auto bad = write_scratch("bad.cm", R"j({"matrix": [[2, 1]]})j");
  auto r = run({"derive", "--cartan", bad.string()});
  CHECK(r.code == cli::kInput);
  CHECK_FALSE(r.err.empty());
  auto parity = write_scratch("parity.cm", R"j({"matrix": [[2]], "parities": ["odd", "even"]})j");
  CHECK(run({"derive", "--cartan", parity.string()}).code == cli::kInput);
  auto garbage = write_scratch("garbage.json", "{\"base\": [0, 0], \"components\": [\"-ln(x+\"]}");
  CHECK(run({"verify-lse", "--cartan", data("sl2.cm"), "--solution", garbage.string()}).code == cli::kInput);
  CHECK(run({"verify-liouville", "--f", "x+", "--g", "y+1"}).code == cli::kInput);

  // singular A cannot be put into LS form
  auto zero = write_scratch("zero.cm", R"j({"matrix": [[0]]})j");
  auto s = run({"derive", "--cartan", zero.string(), "--form", "ls"});
  CHECK(s.code == cli::kFailed);
  CHECK_FALSE(s.err.empty());
  auto z = run({"derive", "--cartan", zero.string(), "--form", "lsbis"});
  CHECK(z.code == cli::kOk);
  CHECK(z.out.find("G_xy = 0") != std::string::npos);

  // domain failures: f' = 0 at the base point, non-multiple step
  CHECK(run({"verify-liouville", "--f", "x^2", "--g", "y+1"}).code == cli::kFailed);
  CHECK(run({"solve", "--cartan", data("sl2.cm"), "--boundary", data("liouville_boundary.json"), "--h", "2/3",
             "--out", scratch("g.csv").string()})
            .code == cli::kFailed);
  CHECK(run({"solve", "--cartan", data("osp12.cm"), "--boundary", data("liouville_boundary.json"), "--h", "1/4",
             "--out", scratch("g.csv").string()})
            .code == cli::kFailed);
}

TEST_CASE("ZCURV_ORDER", "[cli]") {
  {
    EnvOrder env("5");
    auto r = run({"verify-liouville", "--f", "x+1", "--g", "y+1"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("order: 5\n", 0) == 0);
    // an explicit flag wins
    CHECK(run({"verify-liouville", "--f", "x+1", "--g", "y+1", "--order", "3"}).out.rfind("order: 3\n", 0) == 0);
  }
  for (const char* bad : {"1", "abc", "7x", "100"}) {
    EnvOrder env(bad);
    CHECK(run({"verify-liouville", "--f", "x+1", "--g", "y+1"}).code == cli::kUsage);
  }
  CHECK(run({"verify-liouville", "--f", "x+1", "--g", "y+1", "--order", "1"}).code == cli::kUsage);
}

TEST_CASE("verify-liouville at a shifted base point", "[cli]") {
  auto r = run({"verify-liouville", "--f", "x", "--g", "y", "--order", "6", "--base", "1,1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("max residual coefficient: 0") != std::string::npos);
  CHECK(run({"verify-liouville", "--f", "exp(x)", "--g", "y^3+y+2", "--order", "6"}).code == 0);
  CHECK(run({"verify-liouville", "--f", "x", "--g", "y", "--base", "1"}).code == cli::kUsage);
}

TEST_CASE("expression grammar", "[cli]") {
  auto s = JetShape{0, 0, 6};
  auto jet = [&](const char* t) { return to_jet<Number>(*parse_expression(t), s); };
  CHECK(jet("x^2") == Jet<Number>::variable_x(s) * Jet<Number>::variable_x(s));
  CHECK(jet("1/2*x - 3") == Jet<Number>::variable_x(s).scaled(Rational(1, 2)) - Jet<Number>::constant(s, Number(3)));
  CHECK(jet("exp(ln(x+2))") == jet("x+2"));
  CHECK(jet("(x+1)^-1") == jet("1/(x+1)"));
  CHECK(jet("-(x)") == -Jet<Number>::variable_x(s));
  CHECK(jet("2^3") == Jet<Number>::constant(s, Number(8)));
  CHECK(evaluate(*parse_expression("-2*ln(x+y+2)"), 0.5, 0.25) == Catch::Approx(-2 * std::log(2.75)));
  CHECK(evaluate(*parse_expression("exp(x)*y^2"), 1, 3) == Catch::Approx(9 * std::exp(1.0)));
  for (const char* bad : {"", "x+", "sin(x)", "x^y", "x^1.5", "(x", "x)", "z", "2 3"})
    CHECK_THROWS_AS(parse_expression(bad), ParseError);
}
