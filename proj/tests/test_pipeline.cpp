#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "kdi/pipeline.hpp"

using namespace kdi;

namespace {

LPoly lp(std::initializer_list<std::pair<int, Rat>> terms) {
  LPoly p;
  for (auto& [e, v] : terms) p.add_to(e, v);
  return p;
}

LambdaRational rat(const LPoly& num, int b, const LPoly& poly = LPoly()) {
  return LambdaRational(num, b) + LambdaRational(poly);
}

LPoly pow_lp(const LPoly& p, int k) { return p.pow(k); }

SurfaceClass cls(const Surface& X, const std::string& s) { return parse_class(X, s); }

nlohmann::json load(const std::string& name) {
  std::ifstream in(std::string(KDI_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

// t-polynomial [[exp, coeff], ...] as a Lambda-polynomial: t^k -> Lambda^{4k + shift},
// or Lambda^{shift - 4k} when inverted.
LPoly tpoly(const nlohmann::json& a, int shift = 0, bool inverted = false) {
  LPoly p;
  for (auto& term : a) {
    const int k = term[0].get<int>();
    p.add_to(inverted ? shift - 4 * k : 4 * k + shift, Rat(Int(std::to_string(term[1].get<long long>()))));
  }
  return p;
}

// label of the i-th exceptional curve on the blowup in s points
std::string Ei(int s, int i) { return s == 1 ? "E" : "E" + std::to_string(i); }

long binom2(int n) { return static_cast<long>(n + 2) * (n + 1) / 2; }

}  // namespace

TEST_CASE("one-point blowup in the chamber of H") {
  const Surface& X = hatP2();
  const auto zero = SurfaceClass::zero(X), F = cls(X, "F");
  CHECK(chi_hatP2_H(F, cls(X, "4H-3E"), 1).closed == rat(1, 8, lp({{0, -1}, {8, 1}})));
  CHECK(chi_hatP2_H(zero, cls(X, "4H-2E"), 0).closed ==
        rat(lp({{0, 1}, {8, 3}}), 12, lp({{0, -1}, {4, Rat(-45, 2)}, {8, 108}, {12, Rat(-1225, 2)}})));
  CHECK(chi_hatP2_H(zero, cls(X, "4H-3E"), 0).closed ==
        rat(1, 9, lp({{0, -1}, {4, Rat(-39, 2)}, {8, 291}, {12, -3531}, {16, Rat(16229, 2)}, {20, Rat(-51, 2)}})));
  CHECK(chi_hatP2_H(zero, cls(X, "4H-2E"), 2).closed ==
        rat(lp({{0, 1}, {4, 2}, {8, 1}}), 10, lp({{0, -1}, {4, -54}, {8, 897}, {12, -4614}, {16, Rat(17201, 2)}})));
  CHECK(chi_hatP2_H(zero, cls(X, "5H-3E"), 0).closed ==
        rat(lp({{0, 1}, {8, 6}, {16, 1}}), 15,
            lp({{0, -1}, {4, -27}, {8, 366}, {12, -6066}, {16, 18917}, {20, -33}})));
  CHECK(chi_hatP2_H(zero, cls(X, "5H-3E"), 2).closed ==
        rat(pow_lp(lp({{0, 1}, {4, 1}}), 3), 13,
            lp({{0, -1}, {4, -64}, {8, 2163}, {12, -32806}, {16, 172163}, {20, -242616}, {24, 1007}})));
  CHECK(chi_hatP2_H(zero, cls(X, "5H-3E"), 4).closed ==
        rat(pow_lp(lp({{0, 1}, {4, 1}}), 2) * Rat(2), 11,
            lp({{0, -2}, {4, -218}, {8, 10110}, {12, -170462}, {16, 1121538}, {20, -2798450}, {24, 2249462},
                {28, -18786}})));
  CHECK(chi_hatP2_H(zero, cls(X, "5H-4E"), 0).closed ==
        rat(1, 11, lp({{0, -1}, {4, -23}, {8, 786}, {12, -20234}, {16, 124671}, {20, -201885}, {24, 18372}, {28, -21840}})));
  CHECK(chi_hatP2_H(zero, cls(X, "5H-4E"), 2).closed ==
        rat(1, 9, lp({{0, -1}, {4, -57}, {8, 3691}, {12, -95035}, {16, 741175}, {20, -2043587}, {24, 1906119},
                      {28, -414993}, {32, 295880}})));
}

TEST_CASE("one-point blowup: argument checks") {
  const Surface& X = hatP2();
  CHECK_THROWS_AS(chi_hatP2_H(cls(X, "H"), cls(X, "4H-2E"), 0), ArgumentError);       // c1 not 0 or F
  CHECK_THROWS_AS(chi_hatP2_H(SurfaceClass::zero(X), cls(X, "4H"), 0), ArgumentError);  // m = 4
  CHECK_THROWS_AS(chi_hatP2_H(SurfaceClass::zero(X), cls(X, "4H-3E"), 1), ArgumentError);  // parity
  CHECK_THROWS_AS(chi_hatP2_H(SurfaceClass::zero(P2()), cls(P2(), "4H"), 0), ArgumentError);
}

TEST_CASE("P2 in degree 4 and 5") {
  CHECK(chi_P2(P2C1::H, 4, 0).closed == rat(lp({{3, 1}, {7, 6}, {15, 1}}), 15));
  CHECK(chi_P2(P2C1::Zero, 4, 0).closed == rat(lp({{0, 1}, {8, 6}, {12, 1}}), 15, lp({{0, -1}, {4, Rat(-51, 2)}})));
  CHECK(chi_P2(P2C1::Zero, 5, 0).closed ==
        rat(lp({{0, 1}, {8, 21}, {12, 20}, {16, 21}, {24, 1}}), 21, lp({{0, -1}, {4, -33}})));
  CHECK(equal_up_to_laurent_poly(chi_P2(P2C1::Zero, 4, 2).closed, rat(lp({{0, 1}, {4, 3}, {8, 4}}), 13)));
}

TEST_CASE("route independence of the Bezout index") {
  CHECK(chi_P2(P2C1::Zero, 4, 0, 3).closed == chi_P2(P2C1::Zero, 4, 0, 4).closed);
  CHECK(chi_P2(P2C1::Zero, 5, 0, 4).closed == chi_P2(P2C1::Zero, 5, 0).closed);
  CHECK(chi_P2(P2C1::Zero, 5, 2, 4).closed == chi_P2(P2C1::Zero, 5, 2).closed);
  CHECK(chi_P2(P2C1::H, 4, 0, 3).closed == chi_P2(P2C1::H, 4, 0).closed);
  CHECK(chi_P2(P2C1::H, 5, 1, 4).closed == chi_P2(P2C1::H, 5, 1).closed);
  CHECK_THROWS_AS(chi_P2(P2C1::Zero, 4, 0, 2), ArgumentError);
  // beyond the window of the (n-1)F + 2G closed form the wall list is infinite
  CHECK_THROWS_AS(chi_P2(P2C1::Zero, 3, 6, 2), ArgumentError);
}

TEST_CASE("P2 with c1 = 0: the numerators and the Lambda^4 correction for n <= 7") {
  const auto data = load("p2_numerators.json");
  for (auto& e : data["p"]) {
    const int n = e["n"].get<int>();
    if (n > 7) continue;
    CAPTURE(n);
    const auto res = chi_P2(P2C1::Zero, n, 0);
    const LPoly corr = lp({{0, -1}, {4, frac(-(n * n + 6 * n + 11), 2)}});
    CHECK(res.closed == rat(tpoly(e["t_poly"]), static_cast<int>(binom2(n)), corr));
    CHECK(res.exact);
    if (n % 2 == 0) {
      const auto resH = chi_P2(P2C1::H, n, 0);
      CHECK(resH.closed == rat(tpoly(e["t_poly"], n * n - 1, true), static_cast<int>(binom2(n))));
    }
  }
}

TEST_CASE("P2 with c1 = H and one point") {
  const auto data = load("p2_numerators.json");
  for (auto& e : data["q_point"]) {
    const int n = e["n"].get<int>();
    if (n > 7) continue;
    CAPTURE(n);
    CHECK(chi_P2(P2C1::H, n, 1).closed == rat(tpoly(e["t_poly"], 3), static_cast<int>(binom2(n)) - 1));
  }
}

TEST_CASE("P2 point-class tables for d <= 5 up to Laurent polynomials") {
  const auto data = load("p2_point_tables.json");
  int checked = 0;
  for (auto& e : data["entries"]) {
    const int d = e["d"].get<int>(), r = e["r"].get<int>();
    if (d > 5 || r > 8) continue;
    CAPTURE(d);
    CAPTURE(r);
    const int b = static_cast<int>(binom2(d)) - r;
    if (r % 2 == 0) {
      CHECK(equal_up_to_laurent_poly(chi_P2(P2C1::Zero, d, r).closed, rat(tpoly(e["t_poly"]), b)));
      ++checked;
    }
    if (d % 2 == 1 && r % 2 == 1) {
      CHECK(equal_up_to_laurent_poly(chi_P2(P2C1::H, d, r).closed, rat(tpoly(e["t_poly"], -1), b)));
      ++checked;
    }
    if (d % 2 == 0 && r % 2 == 0) {
      CHECK(equal_up_to_laurent_poly(chi_P2(P2C1::H, d, r).closed, rat(tpoly(e["t_poly"], d * d - 2 * r - 1, true), b)));
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("blowups of P2: L = dH - 2E") {
  const auto data = load("blowup_tables.json");
  for (auto& e : data["q"]) {
    const int d = e["d"].get<int>(), s = e["s"].get<int>();
    if (d > 5 || s > 3) continue;
    CAPTURE(d);
    CAPTURE(s);
    const Surface& X = blowup_P2(s);
    std::string Ls = std::to_string(d) + "H";
    std::string Es;
    for (int i = 1; i <= s; ++i) Ls += "-2" + Ei(s, i), Es += (i > 1 ? "+" : "") + Ei(s, i);
    const auto L = cls(X, Ls);
    const int b = static_cast<int>(binom2(d)) - 3 * s;
    const auto res = chi_blowup_P2(SurfaceClass::zero(X), L, 0);
    CHECK_FALSE(res.exact);
    CHECK(equal_up_to_laurent_poly(res.closed, rat(tpoly(e["t_poly"]), b)));
    if (d % 2 == 1)
      CHECK(equal_up_to_laurent_poly(chi_blowup_P2(cls(X, Es), L, 0).closed,
                                     rat(tpoly(e["t_poly"], d * d - 1 - 3 * s, true), b)));
    else
      CHECK(equal_up_to_laurent_poly(chi_blowup_P2(SurfaceClass::K(X), L, 0).closed,
                                     rat(tpoly(e["t_poly"], d * d - 1 - 3 * s, true), b)));
  }
}

TEST_CASE("blowup threshold") {
  // the walls -2E_i (and their sums) sit at Lambda-degrees up to the threshold
  const Surface& X = blowup_P2(1);
  const auto res = chi_blowup_P2(SurfaceClass::zero(X), cls(X, "4H-2E"), 0);
  CHECK(res.equiv_threshold == 12);  // xi = -2E: xi^2 + 2|<xi,L-K>| + 4 = -4 + 12 + 4
  CHECK(res.prefix_order >= res.equiv_threshold);
  // a single blowup with m = 0 and c1 = 0: R_1 = 1, no wall of type c1 can contribute
  const auto res0 = chi_blowup_P2(SurfaceClass::zero(X), cls(X, "4H"), 0);
  CHECK(res0.closed == chi_P2(P2C1::Zero, 4, 0).closed);
}

TEST_CASE("blowup and blowdown round trip") {
  const LambdaRational lam(LPoly::monomial(Rat(1), 1));
  for (int s = 1; s <= 3; ++s) {
    CAPTURE(s);
    const Surface& X = blowup_P2(s);
    // m_i = 0 everywhere: R_1 = 1 and S_1 = Lambda
    CHECK(chi_blowup_P2(SurfaceClass::zero(X), cls(X, "4H"), 2).closed == chi_P2(P2C1::Zero, 4, 2).closed);
    CHECK(chi_blowup_P2(cls(X, "H"), cls(X, "3H"), 1).closed == chi_P2(P2C1::H, 3, 1).closed);
    CHECK(chi_blowup_P2(cls(X, Ei(s, 1)), cls(X, "4H"), 0).closed == lam * chi_P2(P2C1::Zero, 4, 0).closed);
  }
  // S_2 = P Lambda
  const Surface& X = blowup_P2(1);
  CHECK(chi_blowup_P2(cls(X, "E"), cls(X, "4H-E"), 1).closed == lam * chi_P2(P2C1::Zero, 4, 2).closed);
}

TEST_CASE("P1xP1 along the diagonal") {
  const auto data = load("p1p1_numerators.json");
  for (auto& e : data["q0"]) {
    const int d = e["d"].get<int>();
    if (d > 4) continue;
    CAPTURE(d);
    CHECK(chi_P1P1_diag(P1P1C1::Zero, d).closed ==
          rat(tpoly(e["t_poly"]), (d + 1) * (d + 1), lp({{0, -1}, {4, -(d * d + 4 * d + 5)}})));
  }
  for (auto& e : data["qFG"]) {
    const int d = e["d"].get<int>();
    if (d > 4) continue;
    CAPTURE(d);
    CHECK(chi_P1P1_diag(P1P1C1::FG, d).closed == rat(tpoly(e["t_poly"], 2), (d + 1) * (d + 1), lp({{2, -1}})));
  }
  for (auto& e : data["qF"]) {
    const int d = e["d"].get<int>();
    if (d > 4) continue;
    CAPTURE(d);
    const auto res = chi_P1P1_diag(P1P1C1::F, d);
    CHECK(res.closed == rat(tpoly(e["t_poly"]), (d + 1) * (d + 1)));
    CHECK(chi_P1P1_diag(P1P1C1::G, d).closed == res.closed);
  }
  // odd d, c1 = F+G: q^{F+G}_d(t) = t^{d^2/2} q^0_d(1/t)
  for (int d : {1, 3}) {
    CAPTURE(d);
    const auto q0 = data["q0"][d - 1]["t_poly"];
    CHECK(chi_P1P1_diag(P1P1C1::FG, d).closed == rat(tpoly(q0, 2 * d * d, true), (d + 1) * (d + 1), lp({{2, -1}})));
  }
}

TEST_CASE("P1xP1: diagonal and general routes agree") {
  for (int d = 1; d <= 3; ++d) {
    CAPTURE(d);
    CHECK(chi_P1P1_general(P1P1C1::Zero, d, d, 0).closed == chi_P1P1_diag(P1P1C1::Zero, d).closed);
    CHECK(chi_P1P1_general(P1P1C1::FG, d, d, 0).closed == chi_P1P1_diag(P1P1C1::FG, d).closed);
  }
  CHECK(chi_P1P1_general(P1P1C1::F, 2, 2, 0).closed == chi_P1P1_diag(P1P1C1::F, 2).closed);
  CHECK(chi_P1P1_general(P1P1C1::G, 2, 2, 0).closed == chi_P1P1_diag(P1P1C1::F, 2).closed);
}

TEST_CASE("P1xP1 general route: closed forms for m <= 2") {
  const LPoly one = LPoly(1), l4 = LPoly::monomial(Rat(1), 4);
  for (int n = 1; n <= 4; ++n) {
    CAPTURE(n);
    // nF with even point powers vanishes up to initial terms
    for (int r : {2, 4}) {
      CHECK(chi_P1P1_general(P1P1C1::Zero, n, 0, r).closed.is_laurent_polynomial());
      CHECK(chi_P1P1_general(P1P1C1::F, n, 0, r).closed.is_laurent_polynomial());
    }
    // nF + G
    CHECK(equal_up_to_laurent_poly(chi_P1P1_general(P1P1C1::Zero, n, 1, 0).closed, rat(1, 2 * n + 2)));
    // nF + 2G
    const LPoly plus = (one + l4).pow(n), minus = (one - l4).pow(n);
    CHECK(equal_up_to_laurent_poly(chi_P1P1_general(P1P1C1::Zero, n, 2, 0).closed,
                                   rat((plus + minus) * Rat(1, 2), 3 * n + 3)));
    CHECK(equal_up_to_laurent_poly(chi_P1P1_general(P1P1C1::F, n, 2, 0).closed,
                                   rat((plus - minus) * Rat(1, 2), 3 * n + 3)));
  }
  CHECK_THROWS_AS(chi_P1P1_general(P1P1C1::F, 2, 1, 0), ArgumentError);  // parity
}

TEST_CASE("structural checks") {
  const Surface& P = P2();
  const auto H = cls(P, "H");
  SUBCASE("p_4(1) = 2^3 and duality with Q_4") {
    const auto r0 = chi_P2(P2C1::Zero, 4, 0), rH = chi_P2(P2C1::H, 4, 0);
    const auto rep = verify_conjectures(r0, H * 4, &rH);
    CHECK(rep["g(L)"] == 3);
    CHECK(rep["numerator_at_1_is_2^g"] == true);
    CHECK(rep["denominator_is_chi"] == true);
    CHECK(rep["duality"] == true);
  }
  SUBCASE("P_5 is palindromic") {
    const auto r0 = chi_P2(P2C1::Zero, 5, 0);
    const auto rep = verify_conjectures(r0, H * 5, &r0);
    CHECK(rep["duality"] == true);
    CHECK(rep["numerator_at_1_is_2^g"] == true);
  }
  SUBCASE("q^0_3(1) = 2^4 on P1xP1") {
    const auto r = chi_P1P1_diag(P1P1C1::Zero, 3);
    const auto rep = verify_conjectures(r, cls(P1xP1(), "3F+3G"));
    CHECK(rep["numerator_at_1"] == "16");
    CHECK(rep["numerator_at_1_is_2^g"] == true);
  }
  SUBCASE("canonical numerator modulo (1 - Lambda^4)^chi") {
    // P/(1-t)^3 + Laurent polynomial with P of minimal span
    const LambdaRational x = rat(lp({{0, 1}, {4, 1}}), 3, lp({{0, 5}, {4, -7}, {8, 2}}));
    const auto p = conjectural_numerator(x, 3);
    REQUIRE(p.has_value());
    CHECK(*p == lp({{0, 1}, {4, 1}}));
    CHECK_FALSE(conjectural_numerator(x, 2).has_value());
  }
}

TEST_CASE("results: JSON, prefix and exponent support") {
  const auto res = chi_P2(P2C1::H, 4, 0);
  const auto j = to_json(res);
  CHECK(j["surface"] == "P2");
  CHECK(j["c1"] == "H");
  CHECK(j["lambda_pow"] == -3);
  CHECK(j["one_minus_l4_pow"] == 15);
  CHECK(j["numerator"][0][0] == 0);
  CHECK(j["numerator"][0][1] == "1");
  CHECK(j["equiv_threshold"].is_null());
  CHECK(j["checks"]["exponent_support"] == true);
  // prefix agrees with the closed form
  CHECK(res.series_prefix.coeff(3) == 1);
  CHECK(res.series_prefix.coeff(7) == 15 + 6);
  for (auto& [e, v] : res.series_prefix.terms()) CHECK(((e % 4) + 4) % 4 == 3);
}

TEST_CASE("trace output: one JSON line per wall term") {
  std::ostringstream os;
  const Surface& X = hatP2();
  chi_hatP2_H(SurfaceClass::zero(X), cls(X, "4H-3E"), ppoly_monomial(0), &os);
  std::istringstream in(os.str());
  std::string line;
  std::set<std::string> xis;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    xis.insert(j["xi"].get<std::string>());
    CHECK(j.contains("A"));
    CHECK(j.contains("delta"));
  }
  CHECK(xis == std::set<std::string>{"-2E", "-4E"});
}

TEST_CASE("depth limits and parity errors") {
  auto saved = pipeline_limits();
  pipeline_limits().p2_max_n = 5;
  CHECK_THROWS_AS(chi_P2(P2C1::Zero, 6, 0), DepthLimitError);
  pipeline_limits().p1p1_max_d = 2;
  CHECK_THROWS_AS(chi_P1P1_diag(P1P1C1::Zero, 3), DepthLimitError);
  pipeline_limits() = saved;
  CHECK_THROWS_AS(chi_P2(P2C1::H, 4, 1), ArgumentError);
  CHECK_THROWS_AS(chi_P2(P2C1::Zero, 4, 1), ArgumentError);
  CHECK_THROWS_AS(chi_P2(P2C1::Zero, 0, 0), ArgumentError);
  CHECK_THROWS_AS(chi_P1P1_diag(P1P1C1::F, 3), ArgumentError);
  const Surface& X = blowup_P2(2);
  CHECK_THROWS_AS(chi_blowup_P2(cls(X, "E1"), cls(X, "4H"), 1), ArgumentError);
  CHECK_THROWS_AS(chi_blowup_P2(SurfaceClass::zero(X), cls(X, "4H+E1"), 0), ArgumentError);
}
