#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "zcurv/cartan.hpp"
#include "zcurv/cartan_io.hpp"

using namespace zcurv;

TEST_CASE("parse_cartan reads the basic documents", "[cartan]") {
  CartanMatrix a = parse_cartan(R"({"matrix": [[2]]})");
  CHECK(a.rank() == 1);
  CHECK(a(0, 0) == 2);
  CHECK(a.parities() == std::vector<Parity>{Parity::even});

  CartanMatrix b = parse_cartan(R"({"matrix": [[1]], "parities": ["odd"]})");
  CHECK(b(0, 0) == 1);
  CHECK(b.parities() == std::vector<Parity>{Parity::odd});

  CartanMatrix c = parse_cartan(R"({"matrix": [[2, "-1/2"], [-1, 2]], "name": "x"})");
  CHECK(c(0, 1) == Rational(-1, 2));
  CHECK(c.name() == "x");
}

TEST_CASE("parse_cartan rejects malformed documents with a position", "[cartan]") {
  auto fails = [](const char* text, const char* fragment) {
    try {
      parse_cartan(text);
    } catch (const ParseError& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
      CHECK(e.line() >= 1);
      return;
    }
    FAIL("no error for " << text);
  };
  fails(R"({"matrix":[[2,-1],[0,2]],"parities":["even","even","odd"]})", "parity list length mismatch");
  fails(R"({"matrix":[[2,-1],[0]]})", "non-square");
  fails(R"({"matrix":[[2.5]]})", "non-rational");
  fails(R"({"matrix":[[2]], "extra": 1})", "unknown key");
  fails(R"({"parities":["even"]})", "missing required key");
  fails(R"({"matrix":[[2]], "parities":["odd-ish"]})", "parity must be");
  fails(R"({"matrix":[[2]])", "");
  fails("[1, 2]", "top-level object");
}

TEST_CASE("render_cartan round-trips", "[cartan]") {
  zt::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + trial % 4;
    std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n));
    std::vector<Parity> p;
    for (auto& row : e)
      for (auto& v : row) v = zt::small_rational(rng, 4, 3);
    for (std::size_t i = 0; i < n; ++i) p.push_back(rng() % 2 ? Parity::odd : Parity::even);
    std::optional<std::string> name;
    if (trial % 3 == 0) name = "m\"" + std::to_string(trial);
    CartanMatrix A(e, p, name);
    CHECK(parse_cartan(render_cartan(A)) == A);
  }
}

TEST_CASE("check_admissible on the worked cases", "[cartan]") {
  auto one = [](int d, Parity p = Parity::even) { return CartanMatrix({{Rational(d)}}, {p}); };
  CHECK(check_admissible(one(1, Parity::odd), Scheme::LSE1).admissible);
  auto r = check_admissible(one(2), Scheme::LSE1);
  CHECK_FALSE(r.admissible);
  CHECK(r.offending_indices == std::vector<std::size_t>{0});
  CHECK(check_admissible(one(2), Scheme::LSE2).admissible);
  CHECK(check_admissible(one(1), Scheme::LSE2).admissible);
  CHECK(check_admissible(one(0), Scheme::LSE1).admissible);
  CHECK_FALSE(check_admissible(one(0), Scheme::LSE2).admissible);
}

TEST_CASE("check_admissible agrees with the diagonal sets on all small matrices", "[cartan]") {
  const int vals[] = {-1, 0, 1, 2, 3};
  for (int a : vals)
    for (int b : vals)
      for (int off : {0, -1, 3}) {
        CartanMatrix A({{Rational(a), Rational(off)}, {Rational(-off), Rational(b)}});
        bool lse1 = (a == 0 || a == 1) && (b == 0 || b == 1);
        bool lse2 = (a == 2 || a == 1) && (b == 2 || b == 1);
        CHECK(check_admissible(A, Scheme::LSE1).admissible == lse1);
        CHECK(check_admissible(A, Scheme::LSE2).admissible == lse2);
        bool all_ones = a == 1 && b == 1;
        CHECK((lse1 && lse2) == all_ones);
      }
}

TEST_CASE("whitelist of superprincipal families", "[cartan]") {
  for (auto s : {"sl(2|3)", "sl(3|2)", "sl(1|2)", "osp(1|2)", "osp(3|2)", "osp(2|2)", "osp(4|2)", "osp(3|4)",
                 "osp(5|4)", "osp(4|4)", "osp(6|4)", "osp_a(4|2)", "osp( 7 | 6 )"})
    CHECK(whitelist_superprincipal(s));
  for (auto s : {"sl(2|2)", "sl(1|3)", "sl(0|1)", "osp(1|4)", "osp(5|2)", "osp(2|4)", "osp(1|3)", "osp(3|3)",
                 "osp(8|4)", "osp_a(4|4)"})
    CHECK_FALSE(whitelist_superprincipal(s));
  CHECK_THROWS_AS(parse_family("gl(2|3)"), ParseError);
  CHECK_THROWS_AS(parse_family("sl(2,3)"), ParseError);
}

TEST_CASE("standard Cartan matrices", "[cartan]") {
  CHECK(standard_cartan("sl2").entries() == std::vector<std::vector<Rational>>{{Rational(2)}});
  CartanMatrix osp = standard_cartan("osp12");
  CHECK(osp(0, 0) == 1);
  CHECK(osp.parities()[0] == Parity::odd);
  CartanMatrix sl3 = standard_cartan("sl3");
  CHECK(sl3.entries() == std::vector<std::vector<Rational>>{{Rational(2), Rational(-1)}, {Rational(-1), Rational(2)}});
  CHECK(standard_cartan("sl_5").rank() == 4);
  CHECK_THROWS_AS(standard_cartan("e8"), DomainError);
}

TEST_CASE("inverse of a Cartan matrix", "[cartan]") {
  auto inv = standard_cartan("sl3").inverse();
  REQUIRE(inv);
  CHECK((*inv)[0][0] == Rational(2, 3));
  CHECK((*inv)[0][1] == Rational(1, 3));
  CHECK_FALSE(CartanMatrix({{Rational(0)}}).inverse());
  CHECK_FALSE(CartanMatrix({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}).inverse());
}
