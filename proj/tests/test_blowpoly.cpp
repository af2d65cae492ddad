#include "doctest.h"
#include "kdi/blowpoly.hpp"

using namespace kdi;

namespace {

const UPoly T = UPoly::monomial(Rat(1), 1);  // t = lambda^4

UPoly omt(int k) { return UPoly::one_minus_t_pow(k); }

BiPoly bipoly(std::vector<UPoly> cx, bool odd = false) { return BiPoly(std::move(cx), odd); }

}  // namespace

TEST_CASE("first blowup polynomials") {
  CHECK(R(0) == BiPoly::constant(UPoly(1)));
  CHECK(R(1) == BiPoly::constant(UPoly(1)));
  CHECK(R(2) == BiPoly::constant(omt(1)));
  CHECK(S(1) == BiPoly::constant(UPoly(1)).with_odd_lambda(true));
  CHECK(S(2) == BiPoly::x_pow(1).with_odd_lambda(true));
  // R3 = -t x^2 + (1-t)^2
  CHECK(R(3) == bipoly({omt(2), UPoly(), -T}));
  // S4 = lambda x ((1 - t^2) x^2 - 2 (1-t)^3)
  CHECK(S(4) == bipoly({UPoly(), omt(3) * Rat(-2), UPoly(), UPoly(1) - T * T}, true));
  // R4 = -t x^4 + (1-t)^4
  CHECK(R(4) == bipoly({omt(4), UPoly(), UPoly(), UPoly(), -T}));
}

TEST_CASE("negative indices") {
  CHECK(R(-3) == R(3));
  CHECK(S(-3) == -S(3));
  CHECK(R(-7) == R(7));
  CHECK(S(-6) == -S(6));
  CHECK(S(0) == BiPoly().with_odd_lambda(true));
}

TEST_CASE("recursion exactness, membership, doubling and inversion symmetry") {
  for (int n = 1; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(check_membership(n));
    CHECK(verify_inversion_symmetry(n));
    if (2 * n <= 13) CHECK(verify_doubling(n));
  }
  // the recursion divides exactly up to index 13 (throws otherwise)
  CHECK_NOTHROW(R(13));
  CHECK_NOTHROW(S(13));
  CHECK_THROWS_AS(verify_inversion_symmetry(0), ArgumentError);
}

TEST_CASE("parity of x-support") {
  for (int n = 1; n <= 10; ++n) {
    CAPTURE(n);
    CHECK(R(n).x_parity() == 0);
    CHECK(S(n).x_parity() == (n % 2 == 0 ? 1 : 0));
    CHECK_FALSE(R(n).odd_lambda());
    CHECK(S(n).odd_lambda());
  }
}

TEST_CASE("Bezout certificates of small index") {
  SUBCASE("S, (3,4)") {
    BezoutCert c = bezout(BezoutKind::S, 3, 4);
    CHECK(c.N == 6);
    CHECK(c.h == bipoly({-omt(4), UPoly(), UPoly(1) - T * T}));
    CHECK(c.l == -BiPoly::x_pow(1));
    CHECK(verify_bezout(c));
  }
  SUBCASE("R, (3,4)") {
    BezoutCert c = bezout(BezoutKind::R, 3, 4);
    CHECK(c.N == 5);
    CHECK(c.h == bipoly({omt(2), UPoly(), T}));
    CHECK(c.l == BiPoly::constant(-T));
    CHECK(c.in_x_squared);
  }
  SUBCASE("R, (4,5)") {
    BezoutCert c = bezout(BezoutKind::R, 4, 5);
    CHECK(c.N == 11);
    CHECK(c.h.x_degree() == 4);
    CHECK(c.l.x_degree() == 2);
  }
  SUBCASE("non-coprime indices are rejected") {
    CHECK_THROWS_AS(bezout(BezoutKind::R, 2, 4), ArgumentError);
    CHECK_THROWS_AS(bezout_euclid(BezoutKind::S, 3, 6), ArgumentError);
  }
}

TEST_CASE("Bezout: evaluation method agrees with the Euclidean reference") {
  for (int n = 1; n <= 6; ++n)
    for (int m = n + 1; m <= 7; ++m) {
      if (std::gcd(n, m) != 1) continue;
      for (BezoutKind k : {BezoutKind::R, BezoutKind::S}) {
        CAPTURE(n);
        CAPTURE(m);
        BezoutCert a = bezout(k, n, m), b = bezout_euclid(k, n, m);
        CHECK(a.N == b.N);
        CHECK(a.h == b.h);
        CHECK(a.l == b.l);
      }
    }
}

TEST_CASE("Bezout exponents on consecutive indices") {
  for (int n = 2; n <= 8; ++n) {
    CAPTURE(n);
    BezoutCert s = bezout(BezoutKind::S, n, n + 1);
    BezoutCert r = bezout(BezoutKind::R, n, n + 1);
    CHECK(s.N == n * (n - 1));
    CHECK(r.N == n * (n - 1) - 1);
    CHECK(verify_bezout(s));
    CHECK(verify_bezout(r));
    // minimality: dividing once more by (1 - t) is impossible
    bool all_div = true;
    for (const BiPoly* p : {&s.h, &s.l})
      for (int j = 0; j <= p->x_degree(); ++j)
        if (!p->xcoeff(j).is_zero() && sgn(p->xcoeff(j).eval(Rat(1))) != 0) all_div = false;
    CHECK_FALSE(all_div);
  }
}

TEST_CASE("JSON round trip") {
  for (int n : {3, 4, 7}) {
    CHECK(bipoly_from_json(bipoly_to_json(R(n))) == R(n));
    CHECK(bipoly_from_json(bipoly_to_json(S(n))) == S(n));
  }
  BezoutCert c = bezout(BezoutKind::S, 4, 5);
  CHECK(bipoly_from_json(bipoly_to_json(c.h)) == c.h);
}

TEST_CASE("substitution lambda -> Lambda, x -> M") {
  ThetaContext ctx(16, 4);
  // R2 = 1 - Lambda^4
  LSeries r2 = eval_poly_at_PM(R(2), ctx);
  LSeries one_minus = LSeries::constant(QLaurent::monomial(GaussRat(1), 0), 15) -
                      LSeries::monomial(GaussRat(1), 4, 0, 15);
  CHECK(r2.agrees_with(one_minus));
  // S2 = Lambda M
  CHECK(eval_poly_at_PM(S(2), ctx).agrees_with(ctx.M_series().shifted(1)));
}

TEST_CASE("theta realization of R_n and S_n") {
  // orders (q^20, Lambda^20)
  ThetaContext ctx = ThetaContext::for_orders(20, 20);
  const int S = ctx.S();
  const SSeries inv_th4 = s_inverse(ctx.constants().th4);
  for (int n = 1; n <= 6; ++n) {
    CAPTURE(n);
    const TSeries norm = ctx.theta4t_pow(-static_cast<long>(n) * n);
    // theta4~(nh) = sum_k (-1)^k s^{k^2} y^{2kn} / theta4
    TSeries t4n = TSeries::constant(Rat(1), ctx.T(), S);
    for (int k = 1; k * k <= S; ++k) {
      TSeries pair = (ctx.exp_lh_t(2 * k * n) + ctx.exp_lh_t(-2 * k * n)).shift_s(k * k);
      t4n = (k % 2 == 0) ? t4n + pair : t4n - pair;
    }
    t4n = t4n * TSeries::from_s(inv_th4, ctx.T(), S);
    CHECK((t4n * norm).agrees_with(eval_poly_tseries(R(n), ctx)));
    // theta1~(nh) * i/q = sum_k (-1)^k s^{k(k+1)} y^{n(2k+1)} / theta4 = t * S~_n(Lambda, M)
    TSeries t1n(0, ctx.T(), S);
    for (int k = -S - 2; k <= S + 1; ++k) {
      long e = static_cast<long>(k) * (k + 1);
      if (e > S) continue;
      TSeries term = ctx.exp_lh_t(n * (2 * k + 1)).shift_s(static_cast<int>(e));
      t1n = (k % 2 == 0) ? t1n + term : t1n - term;
    }
    t1n = t1n * TSeries::from_s(inv_th4, ctx.T(), S);
    CHECK((t1n * norm).agrees_with(eval_poly_tseries(S_tilde(n), ctx).shift_t(1)));
  }
}
