#include "doctest.h"
#include "kdi/theta.hpp"

using namespace kdi;

namespace {

// Independent construction of the ingredients over Q(i) straight from the
// defining theta sums and the integral expansion of h.
struct Oracle {
  int L;    // Lambda-truncation
  long Q;   // q-truncation of the theta constants
  QLaurent th2, th3, th4, u;
  LSeries h, M;

  Oracle(int L_, long Q_) : L(L_), Q(Q_) {
    std::vector<GaussRat> c2(Q + 1), c3(Q + 1), c4(Q + 1);
    for (long n = -20; n <= 20; ++n) {
      long e2 = (2 * n + 1) * (2 * n + 1), e3 = 4 * n * n;
      if (e2 <= Q) c2[e2] += GaussRat(1);
      if (e3 <= Q) {
        c3[e3] += GaussRat(1);
        c4[e3] += GaussRat(n % 2 == 0 ? 1 : -1);
      }
    }
    th2 = QLaurent(0, c2, Q);
    th3 = QLaurent(0, c3, Q);
    th4 = QLaurent(0, c4, Q);
    QLaurent a = th2 * th2, b = th3 * th3;
    u = -(a * b.invert()) - b * a.invert();
    QLaurent pref = (th2 * th3).invert() * GaussRat(Rat(0), Rat(2));
    // h = pref * sum_{n>=k>=0} binom(-1/2,n) binom(n,k) u^k L^{4n-2k+1} / (4n-2k+1)
    h = LSeries::constant(QLaurent(), L);
    Rat bn = 1;  // binom(-1/2, n)
    for (int n = 0; 2 * n + 1 <= L; ++n) {
      if (n > 0) bn = bn * (Rat(-1, 2) - (n - 1)) / n;
      Rat bk = 1;
      QLaurent uk = QLaurent::monomial(GaussRat(1), 0);
      for (int k = 0; k <= n; ++k) {
        if (k > 0) {
          bk = bk * (n - k + 1) / k;
          uk = uk * u;
        }
        int e = 4 * n - 2 * k + 1;
        if (e > L) continue;
        h = h + LSeries::monomial_series(uk * pref * GaussRat(bn * bk / e), e, L);
      }
    }
    LSeries v = LSeries::monomial_series(u, 2, L) + LSeries::monomial(GaussRat(1), 4, 0, L);
    M = binom_sqrt(v) * GaussRat(2);
  }

  LSeries y_pow(int k) const { return exp_series(h * GaussRat(frac(k, 2))); }

  LSeries theta4t() const {
    LSeries num = LSeries::monomial(GaussRat(1), 0, 0, L);
    for (int n = 1; 4 * n * n <= Q; ++n) {
      LSeries pair = (y_pow(2 * n) + y_pow(-2 * n)) * QLaurent::monomial(GaussRat(n % 2 ? -1 : 1), 4 * n * n);
      num = num + pair;
    }
    return num * th4.invert();
  }
};

bool ts_member(const TSeries& x, int deg, int parity) {
  for (int a = x.lo(); a <= x.T(); ++a)
    for (int b = 0; b <= x.S(); ++b) {
      if (sgn(x.at(a, b)) == 0) continue;
      if (((a % 2) + 2) % 2 != parity) return false;
      if (a > deg + 2 * b) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("theta constants and u") {
  ThetaContext ctx(8, 6);
  QLaurent t3 = ctx.theta_const(3), t4 = ctx.theta_const(4), t2 = ctx.theta_const(2);
  CHECK(t3.coeff(0) == GaussRat(1));
  CHECK(t3.coeff(4) == GaussRat(2));
  CHECK(t3.coeff(16) == GaussRat(2));
  CHECK(t3.coeff(8) == GaussRat(0));
  CHECK(t4.coeff(4) == GaussRat(-2));
  CHECK(t4.coeff(16) == GaussRat(2));
  CHECK(t2.coeff(1) == GaussRat(2));
  CHECK(t2.coeff(9) == GaussRat(2));
  CHECK(t2.coeff(25) == GaussRat(2));
  CHECK(t2.coeff(5) == GaussRat(0));
  CHECK_THROWS_AS(ctx.theta_const(1), ArgumentError);
  QLaurent u = ctx.u_series();
  CHECK(u.coeff(-2) == GaussRat(Rat(-1, 4)));
  CHECK(u.coeff(2) == GaussRat(-5));
  CHECK(u.coeff(6) == GaussRat(Rat(31, 2)));
  CHECK(u.coeff(10) == GaussRat(-54));
  for (auto& [e, v] : u.terms()) CHECK(((e % 4) + 4) % 4 == 2);
}

TEST_CASE("engine ingredients agree with the Q(i) oracle") {
  const int L = 9;
  Oracle o(L, 40);
  ThetaContext ctx(L, 8);
  CHECK(ctx.h_of_lambda().agrees_with(o.h));
  CHECK(ctx.M_series().agrees_with(o.M));
  CHECK(ctx.exp_lh(1).agrees_with(o.y_pow(1)));
  CHECK(ctx.exp_lh(4).agrees_with(o.y_pow(4)));
  CHECK(ctx.exp_lh(-3).agrees_with(o.y_pow(-3)));
  LSeries t4 = o.theta4t();
  CHECK(ctx.theta4t_h_pow(1).agrees_with(t4));
  CHECK(ctx.theta4t_h_pow(3).agrees_with(t4 * t4 * t4));
  CHECK(ctx.theta4t_h_pow(-2).agrees_with((t4 * t4).invert()));
  // h* = 4 i L / (theta2 theta3 M)
  LSeries hs = LSeries::monomial_series((o.th2 * o.th3).invert() * GaussRat(Rat(0), Rat(4)), 1, L) *
               o.M.invert();
  CHECK(ctx.hstar_series().agrees_with(hs));
  QLaurent up = (o.th4 * o.th4).invert();  // check u' = 2 theta4^8 / (theta2 theta3)^2
  QLaurent t48 = o.th4 * o.th4 * o.th4 * o.th4;
  t48 = t48 * t48;
  QLaurent upo = t48 * GaussRat(2) * (o.th2 * o.th2 * o.th3 * o.th3).invert();
  CHECK(ctx.uprime_series().agrees_with(upo));
  (void)up;
}

TEST_CASE("h is odd with leading coefficient 2i/(theta2 theta3)") {
  ThetaContext ctx(11, 6);
  LSeries h = ctx.h_of_lambda();
  for (int j = 0; j <= 11; j += 2) CHECK(h.coeff(j).is_zero());
  QLaurent lead = (ctx.theta_const(2) * ctx.theta_const(3)).invert() * GaussRat(Rat(0), Rat(2));
  CHECK(h.coeff(1).agrees_with(lead));
  // dh/dt * (th2q th3 / 4) * M = 1  (the derivative relation in t-variables)
  TSeries lhs = ctx.h_t().diff_t() * ctx.M_t() *
                TSeries::from_s(s_mul(ctx.constants().th2q, ctx.constants().th3), ctx.T(), ctx.S()) *
                Rat(1, 4);
  CHECK(lhs.agrees_with(TSeries::constant(Rat(1), ctx.T(), ctx.S())));
}

TEST_CASE("defining relations of M and h*") {
  ThetaContext ctx(12, 6);
  TSeries M = ctx.M_t();
  TSeries lhs = M * M - ctx.quartic() * Rat(4);
  CHECK(lhs.agrees_with(TSeries(0, ctx.T(), ctx.S())));
  TSeries th23 = TSeries::from_s(s_mul(ctx.constants().th2q, ctx.constants().th3), ctx.T(), ctx.S());
  TSeries x = ctx.hstar_t() * M * th23;
  CHECK(x.agrees_with(TSeries::monomial(Rat(4), 1, 0, ctx.T(), ctx.S())));
}

TEST_CASE("exponentials and hyperbolic functions") {
  ThetaContext ctx(12, 6);
  TSeries one = TSeries::constant(Rat(1), 12, 6);
  CHECK((ctx.exp_lh_t(6) * ctx.exp_lh_t(-6)).agrees_with(one));
  CHECK(ctx.exp_lh_t(0).agrees_with(one));
  TSeries d = ctx.coth_lh_t(2) - ctx.tanh_lh_t(2) - ctx.inv_sinh_lh_t(4) * Rat(2);
  CHECK(d.agrees_with(TSeries(0, d.T(), d.S())));
  CHECK(ctx.inv_sinh_lh(2).valuation() == -1);
  CHECK_THROWS_AS(ctx.coth_lh_t(0), ArgumentError);
  // sinh((2n+1)h/2) in i Q[q^-1 L]_{<=2n+1} R,  cosh(n h) in Q[q^-2 L^2]_{<=n} R
  for (int n = 0; n <= 4; ++n) {
    CHECK(ts_member(ctx.sinh_lh_t(2 * n + 1), 2 * n + 1, 1));
    CHECK(ts_member(ctx.cosh_lh_t(2 * n), 2 * n, 0));
  }
  // y - 1/y is t times a unit
  TSeries s = ctx.sinh_lh_t(1);
  CHECK(s.valuation() == 1);
  CHECK(s.at(1, 0) != 0);
}

TEST_CASE("normalized theta4(h)") {
  ThetaContext ctx(12, 6);
  LSeries t = ctx.theta4t_h_pow(1);
  CHECK(t.coeff(0).coeff(0) == GaussRat(1));
  CHECK(t.coeff(0).terms().size() == 1);
  CHECK(t.coeff(2).valuation() == 2);
  CHECK(t.coeff(2).coeff(2) == GaussRat(1));
  TSeries one = TSeries::constant(Rat(1), 12, 6);
  CHECK((ctx.theta4t_pow(2) * ctx.theta4t_pow(-2)).agrees_with(one));
  CHECK(ctx.theta4t_pow(0).agrees_with(one));
  // theta4~(2h) / theta4~(h)^4 = 1 - L^4
  TSeries num = one;
  for (int n = 1; n * n <= ctx.S(); ++n) {
    TSeries pair = (ctx.exp_lh_t(4 * n) + ctx.exp_lh_t(-4 * n)).shift_s(n * n);
    num = (n % 2 == 0) ? num + pair : num - pair;
  }
  TSeries q = num * TSeries::from_s(s_inverse(ctx.constants().th4), 12, 6) * ctx.theta4t_pow(-4);
  TSeries expect = one - TSeries::monomial(Rat(1), 4, 1, 12, 6);
  CHECK(q.agrees_with(expect));
}

TEST_CASE("Lambda = theta1(h)/theta4(h) round trip") {
  ThetaContext ctx(13, 7);
  TSeries r = ctx.theta1t_iq_t() * ctx.theta4t_t().inverse();
  CHECK(r.agrees_with(TSeries::monomial(Rat(1), 1, 0, r.T(), r.S())));
}

TEST_CASE("translation identity of theta4 on defining sums") {
  // theta4(h) = sum_n (-1)^n q^{4n^2} y^{2n}.  Shifting h by 2 pi i tau multiplies
  // y by q^4: theta4(h + 2 pi i tau) = sum (-1)^n q^{4n^2 + 8n} y^{2n}.  Reindexing
  // n -> n - 1 gives -q^{-4} y^{-2} theta4(h).  Checked on the (q, y) polynomial level.
  std::map<std::pair<int, int>, int> lhs, rhs;
  const int N = 6;
  for (int n = -N; n <= N; ++n) lhs[{4 * n * n, 2 * n}] += (n % 2 == 0 ? 1 : -1);
  for (int n = -N - 1; n <= N + 1; ++n) {
    int sgn_n = (n % 2 == 0 ? 1 : -1);
    // -q^4 y^2 * theta4(h + 2 pi i tau)
    rhs[{4 * n * n + 8 * n + 4, 2 * n + 2}] += -sgn_n;
  }
  for (auto& [k, v] : lhs) CHECK(rhs[k] == v);
}

TEST_CASE("memoized values agree with fresh, higher-order computation") {
  ThetaContext a(9, 5), b(14, 9);
  const TSeries& x = a.theta4t_pow(7);
  const TSeries& y = a.theta4t_pow(7);
  CHECK(&x == &y);
  CHECK(x.agrees_with(b.theta4t_pow(7)));
  CHECK(a.M_pow(5).agrees_with(b.M_pow(5)));
  CHECK(a.coth_lh_t(3).agrees_with(b.coth_lh_t(3)));
  ThetaContext c(9, 5);
  CHECK(c.theta4t_pow(7).agrees_with(x));
}
