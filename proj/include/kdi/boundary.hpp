// Invariants at the boundary polarization F_+ (close to the fibre class F) on
// P1xP1 and on the one-point blowup of P2, for L = nF + mG (m = 0, 1, 2):
//
//   c1 = F:  Coeff_q0[ 1/(2 sinh((m/2+1)h)) Lambda^2 theta4~(h)^{2(n+2)(m+2)} u' h* M^r ]
//   c1 = 0: -Coeff_q0[ 1/2 coth((m/2+1)h)   Lambda^2 theta4~(h)^{2(n+2)(m+2)} u' h* M^r ]
//
// and their closed forms: a known rational function of Lambda^4 plus a
// polynomial of bounded degree in Lambda^4.  The polynomial is read off from
// the series, and the coefficients beyond the degree bound (two extra blocks of
// Lambda^4) are checked to vanish.
#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kdi/lpoly.hpp"
#include "kdi/scalars.hpp"
#include "kdi/theta.hpp"
#include "kdi/tseries.hpp"
#include "kdi/upoly.hpp"
#include "kdi/wallcross.hpp"

namespace kdi {

enum class BoundaryC1 { Zero, F };

inline std::string to_string(BoundaryC1 c) { return c == BoundaryC1::F ? "F" : "0"; }

struct BoundarySpec {
  BoundaryC1 c1 = BoundaryC1::F;
  Rat n;      // coefficient of F (half-integral allowed)
  int m = 0;  // coefficient of G: 0, 1 or 2
  int r = 0;  // point power
};

namespace detail {

inline long fplus_theta_exponent(const Rat& n, int m) {
  Rat e = 2 * (n + 2) * (m + 2);
  if (!is_integer(e)) throw ArgumentError("fplus: exponent 2(n+2)(m+2) is not integral for n = " + rat_to_string(n));
  return e.get_num().get_si();
}

inline void check_boundary_spec(BoundaryC1 c1, const Rat& n, int m, int r) {
  if (m < 0 || m > 2) throw ArgumentError("fplus: m must be 0, 1 or 2");
  if (r < 0) throw ArgumentError("fplus: negative point power");
  fplus_theta_exponent(n, m);
  if (!is_integer(2 * n)) throw ArgumentError("fplus: n must be half-integral");
  // <c1, L> = m for c1 = F, 0 for c1 = 0
  const int c1L = c1 == BoundaryC1::F ? m : 0;
  if ((c1L - r) % 2 != 0)
    throw ArgumentError("fplus: parity violated (<c1,L> = " + std::to_string(c1L) + ", r = " + std::to_string(r) + ")");
  if (c1 == BoundaryC1::F && m == 1 && r % 2 == 0) throw ArgumentError("fplus: parity");
}

}  // namespace detail

// F_+ invariants for several point powers of one (c1, n, m), each through its
// own Lambda-degree: j -> series coefficients (Laurent polynomial up to D_j).
inline std::map<int, LPoly> fplus_series_many(BoundaryC1 c1, const Rat& n, int m, const std::map<int, int>& j_to_D) {
  for (auto& [j, D] : j_to_D) detail::check_boundary_spec(c1, n, m, j);
  std::map<int, LPoly> out;
  if (j_to_D.empty()) return out;
  int D = 0;
  for (auto& [j, d] : j_to_D) D = std::max(D, d);
  ThetaContext ctx(D + 4, D / 4 + 1);
  const long e = detail::fplus_theta_exponent(n, m);
  TSeries kernel = c1 == BoundaryC1::F ? ctx.inv_sinh_lh_t(m + 2) * Rat(1, 2) : ctx.coth_lh_t(m + 2) * Rat(-1, 2);
  TSeries X = kernel * ctx.L2uprime_t();
  X = X * ctx.theta4t_pow(e);
  X = X * ctx.hstar_t();
  return detail::coeff_q0_M_powers(X, ctx, 0, 0, j_to_D);
}

inline LPoly fplus_series(const BoundarySpec& s, int D) {
  return fplus_series_many(s.c1, s.n, s.m, {{s.r, D}}).at(s.r);
}

namespace detail {

inline LPoly one_plus_l4_pow(int k) {
  LPoly r(1), f = LPoly(1) + LPoly::monomial(Rat(1), 4);
  for (int i = 0; i < k; ++i) r *= f;
  return r;
}

// The known rational part of the F_+ invariant and the degree bound (in
// Lambda^4) of the remaining polynomial; -1 means no polynomial remains.
inline std::pair<LambdaRational, int> fplus_known_part(BoundaryC1 c1, const Rat& n, int m, int j) {
  const LPoly x = LPoly::monomial(Rat(1), 4);
  auto inv_pow = [](const Rat& k) {
    if (!is_integer(k)) throw ArgumentError("fplus_closed: non-integral exponent");
    return LambdaRational(LPoly(1), static_cast<int>(k.get_num().get_si()));
  };
  if (m == 0) {
    if (!is_integer(n)) throw ArgumentError("fplus_closed: m = 0 requires integral n");
    if (j > 0) return {LambdaRational(LPoly()), c1 == BoundaryC1::F ? j / 2 : j / 2 + 1};
    LambdaRational k = inv_pow(n + 1) - LambdaRational(LPoly(1));
    if (c1 == BoundaryC1::Zero) k -= LambdaRational(x * Rat(2 * n + 5));
    return {k, -1};
  }
  if (m == 1) {
    if (c1 == BoundaryC1::F) return {inv_pow(2 * n + 1 - (j - 1)), (j - 1) / 2};
    return {inv_pow(2 * n + 2 - j), j / 2 + 1};
  }
  // m = 2
  if (!is_integer(n)) throw ArgumentError("fplus_closed: m = 2 requires integral n");
  const long nn = n.get_num().get_si();
  if (j == 0) {
    if (nn < 0) throw ArgumentError("fplus_closed: (1+Lambda^4)^n with n < 0 is not of the form P/(1-Lambda^4)^b");
    LPoly num = one_plus_l4_pow(static_cast<int>(nn));
    LPoly other = LPoly::one_minus_l4_pow(static_cast<int>(nn));
    num = c1 == BoundaryC1::F ? num - other : num + other;
    LambdaRational k(num * Rat(1, 2), static_cast<int>(3 * nn + 3));
    if (c1 == BoundaryC1::Zero) k -= LambdaRational(LPoly(1) + x * Rat(4 * nn + 9));
    return {k, -1};
  }
  const long rr = j / 2;
  if (nn - rr < 0)
    throw ArgumentError("fplus_closed: (1+Lambda^4)^{n-r} with n < r is not of the form P/(1-Lambda^4)^b");
  Rat c = 1;
  for (long i = 0; i < rr - 1; ++i) c *= 2;
  LambdaRational k(one_plus_l4_pow(static_cast<int>(nn - rr)) * c, static_cast<int>(3 * nn + 3 - 2 * rr));
  return {k, static_cast<int>(2 * rr + 2)};
}

}  // namespace detail

// Degree bound (in Lambda^4) of the polynomial part of the closed form.
inline int fplus_polynomial_degree_bound(const BoundarySpec& s) {
  detail::check_boundary_spec(s.c1, s.n, s.m, s.r);
  return detail::fplus_known_part(s.c1, s.n, s.m, s.r).second;
}

// Exact closed forms for several point powers of one (c1, n, m).
inline std::map<int, LambdaRational> fplus_closed_many(BoundaryC1 c1, const Rat& n, int m, const std::set<int>& js) {
  std::map<int, std::pair<LambdaRational, int>> known;
  std::map<int, int> j_to_D;
  for (int j : js) {
    detail::check_boundary_spec(c1, n, m, j);
    known[j] = detail::fplus_known_part(c1, n, m, j);
    j_to_D[j] = 4 * known[j].second + 8;  // two extra blocks of Lambda^4 as a guard
  }
  auto series = fplus_series_many(c1, n, m, j_to_D);
  std::map<int, LambdaRational> out;
  for (int j : js) {
    const int D = j_to_D[j];
    const int deg = known[j].second;
    LPoly residual = series[j] - known[j].first.series(D).p;
    for (auto& [e, v] : residual.terms()) {
      if (e < 0 || e % 4 != 0 || e > 4 * deg)
        throw ComputationError("fplus_closed: residual has a term Lambda^" + std::to_string(e) + " outside the degree bound " +
                               std::to_string(4 * deg) + " (c1 = " + to_string(c1) + ", n = " + rat_to_string(n) +
                               ", m = " + std::to_string(m) + ", r = " + std::to_string(j) + ")");
    }
    out[j] = known[j].first + LambdaRational(residual);
  }
  return out;
}

inline LambdaRational fplus_closed(const BoundarySpec& s) { return fplus_closed_many(s.c1, s.n, s.m, {s.r}).at(s.r); }

// The polynomial part of the closed form: closed = rational part + polynomial,
// for every m.  These are the polynomials h^0, h^1, h^2 (and their c1 = 0
// analogues); h^0, h^2 and the c1 = 0 ones of m = 1 are indexed by j / 2.
inline LPoly fplus_polynomial_part(const BoundarySpec& s) {
  detail::check_boundary_spec(s.c1, s.n, s.m, s.r);
  auto [k, deg] = detail::fplus_known_part(s.c1, s.n, s.m, s.r);
  return (fplus_closed(s) - k).full_numerator();
}

// Polynomial in Lambda^4 whose coefficients are polynomials in n: the
// coefficient of Lambda^{4k} is entry k (a UPoly in n).
using NPoly = std::vector<UPoly>;

// Recovers the n-dependence of fplus_polynomial_part for (c1, m, r) by
// interpolation at n = 0, 1, ..., with one extra point to confirm the degree
// bound in n (coefficient of Lambda^{4k} has degree <= k in n).
inline NPoly fplus_polynomial_in_n(BoundaryC1 c1, int m, int r, int n0 = 0) {
  const int deg = fplus_polynomial_degree_bound({c1, Rat(n0), m, r});
  if (deg < 0) return {};
  const int npts = deg + 2;
  std::vector<LPoly> vals;
  for (int i = 0; i < npts; ++i) vals.push_back(fplus_polynomial_part({c1, Rat(n0 + i), m, r}));
  NPoly out(deg + 1);
  for (int k = 0; k <= deg; ++k) {
    // Lagrange interpolation through the first k+1 points, checked on the rest
    UPoly p;
    for (int a = 0; a <= k; ++a) {
      UPoly basis(1);
      Rat denom = 1;
      for (int b = 0; b <= k; ++b) {
        if (b == a) continue;
        basis = basis * (UPoly::monomial(Rat(1), 1) - UPoly(Rat(n0 + b)));
        denom *= Rat(a - b);
      }
      p = p + basis * (vals[a].coeff(4 * k) / denom);
    }
    for (int a = k + 1; a < npts; ++a)
      if (p.eval(Rat(n0 + a)) != vals[a].coeff(4 * k))
        throw ComputationError("fplus_polynomial_in_n: coefficient of Lambda^" + std::to_string(4 * k) +
                               " has degree > " + std::to_string(k) + " in n");
    out[k] = p;
  }
  return out;
}

// ---- principal parts ----

// Polynomial in a = q^{-2} Lambda^2 and b = Lambda^4: (i, j) -> coefficient of a^i b^j.
using ABPoly = std::map<std::pair<int, int>, Rat>;

inline std::string abpoly_str(const ABPoly& p) {
  if (p.empty()) return "0";
  std::string s;
  for (auto& [ij, c] : p) {
    auto [i, j] = ij;
    std::string mono;
    if (i > 0) mono += "q^" + std::to_string(-2 * i) + "*";
    if (2 * i + 4 * j > 0) mono += "L^" + std::to_string(2 * i + 4 * j);
    if (!mono.empty() && mono.back() == '*') mono.pop_back();
    std::string cs = rat_to_string(c);
    if (!s.empty()) s += (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) s += "-";
    Rat ac = abs(c);
    if (mono.empty()) s += rat_to_string(ac);
    else s += (ac == 1 ? "" : rat_to_string(ac) + "*") + mono;
  }
  return s;
}

namespace detail {

// Principal part (q-exponent <= 0) of a TSeries whose q-exponents at each
// Lambda-power are even, as a polynomial in q^{-2} Lambda^2 and Lambda^4.
// Monomials of total degree > deg found within the box raise an error.
inline ABPoly principal_part(const TSeries& X, int deg, int D) {
  ABPoly out;
  for (int a = X.lo(); a <= D; ++a)
    for (int b = 0; 4 * b <= a; ++b) {
      const Rat v = X.at(a, b);
      if (sgn(v) == 0) continue;
      // t^a s^b = i^a Lambda^a q^{4b-a}; with 4b - a <= 0 and a even this is
      // (q^{-2} Lambda^2)^{(a-4b)/2} (Lambda^4)^b
      if (a % 2 != 0) throw ComputationError("principal_part: odd Lambda-power");
      const int i = (a - 4 * b) / 2, j = b;
      if (i + j > deg)
        throw ComputationError("principal_part: monomial of degree " + std::to_string(i + j) + " exceeds the bound " +
                               std::to_string(deg));
      out[{i, j}] = (a % 4 == 0) ? v : Rat(-v);
    }
  return out;
}

}  // namespace detail

// g^r_i = principal part of P_i Lambda^2 u' h*, with P_i:
//   1:  1/(2 sinh h) M^{2r}
//   2: -1/2 coth(h) M^{2r}
//   3:  1/(2 sinh(3h/2)) M^{2r-1} (M^2 theta4~(h)^3 - (1 - Lambda^4))
//   4: -1/2 coth(3h/2) M^{2r-2} (M^2 theta4~(h)^3 - (1 - Lambda^4))
//   5: -1/2 tanh(h) M^{2r-2} (theta4~(h)^8 (M^2 - (1 - Lambda^4)^2) - 1)
// with degree bounds r, r+1, r, r+1, r+2 in (q^{-2} Lambda^2, Lambda^4).
inline ABPoly principal_part_vector(int i, int r) {
  if (i < 1 || i > 5) throw ArgumentError("principal_part_vector: index must be 1..5");
  if (r < 1) throw ArgumentError("principal_part_vector: r must be positive");
  static const int extra[6] = {0, 0, 1, 0, 1, 2};
  const int deg = r + extra[i];
  const int D = 4 * (deg + 2);  // every monomial of degree <= deg + 1 lies below Lambda^D
  ThetaContext ctx(D + 4, D / 4 + 1);
  const TSeries one = TSeries::constant(Rat(1), ctx.T(), ctx.S());
  const TSeries one_minus_l4 = one - TSeries::monomial(Rat(1), 4, 1, ctx.T(), ctx.S());
  const TSeries base = ctx.L2uprime_t() * ctx.hstar_t();
  TSeries X;
  switch (i) {
    case 1:
      X = ctx.inv_sinh_lh_t(2) * Rat(1, 2) * ctx.M_pow(2 * r);
      break;
    case 2:
      X = ctx.coth_lh_t(2) * Rat(-1, 2) * ctx.M_pow(2 * r);
      break;
    case 3:
      X = ctx.inv_sinh_lh_t(3) * Rat(1, 2) * ctx.M_pow(2 * r - 1) *
          (ctx.M_pow(2) * ctx.theta4t_pow(3) - one_minus_l4);
      break;
    case 4:
      X = ctx.coth_lh_t(3) * Rat(-1, 2) * ctx.M_pow(2 * r - 2) * (ctx.M_pow(2) * ctx.theta4t_pow(3) - one_minus_l4);
      break;
    case 5:
      X = ctx.tanh_lh_t(2) * Rat(-1, 2) * ctx.M_pow(2 * r - 2) *
          (ctx.theta4t_pow(8) * (ctx.M_pow(2) - one_minus_l4 * one_minus_l4) - one);
      break;
  }
  X = X * base;
  return detail::principal_part(X, deg, D);
}

}  // namespace kdi
