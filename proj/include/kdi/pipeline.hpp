// End-to-end computations of generating functions of K-theoretic Donaldson
// invariants:
//
//  * the one-point blowup of P2 in the chamber of H, for L = nF + mG (m <= 2):
//    the F_+ closed form plus the walls between F_+ and H;
//  * P2 itself, by blowing down with a Bezout certificate of two consecutive
//    blowup polynomials;
//  * blowups of P2 near H, by the blowup formulas (up to finitely many initial
//    terms);
//  * P1xP1 with L = d(F+G) in the chamber of F+G, through the two-point blowup
//    of P2, the walls between H and F+G there, and a blowdown; and general
//    L = nF + mG by the blowup formulas plus those walls.
//
// Point-class insertions are polynomials in P with Laurent-polynomial
// coefficients (PPoly); every invariant is linear in them.
#pragma once

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kdi/blowpoly.hpp"
#include "kdi/boundary.hpp"
#include "kdi/lattice.hpp"
#include "kdi/lpoly.hpp"
#include "kdi/scalars.hpp"
#include "kdi/wallcross.hpp"

namespace kdi {

enum class P2C1 { Zero, H };
enum class P1P1C1 { Zero, F, G, FG };

inline std::string to_string(P2C1 c) { return c == P2C1::H ? "H" : "0"; }
inline std::string to_string(P1P1C1 c) {
  switch (c) {
    case P1P1C1::Zero: return "0";
    case P1P1C1::F: return "F";
    case P1P1C1::G: return "G";
    case P1P1C1::FG: return "F+G";
  }
  return "?";
}

// Raised when a request exceeds the configured computation depth.
class DepthLimitError : public std::runtime_error {
 public:
  explicit DepthLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Depth limits; the defaults are the ranges of the published tables.
struct PipelineLimits {
  int p2_max_n = 11;
  int p1p1_max_d = 7;
};

inline PipelineLimits& pipeline_limits() {
  static PipelineLimits limits;
  return limits;
}

// Result of a pipeline run.  closed = N / (Lambda^a (1 - Lambda^4)^b).  When
// exact is false, closed agrees with the invariant in all Lambda-exponents
// above equiv_threshold.  series_prefix is the expansion of closed through
// Lambda^prefix_order.
struct InvariantResult {
  std::string surface;
  std::string c1;
  std::string L;
  int r = 0;
  LambdaRational closed;
  bool exact = true;
  int equiv_threshold = INT_MIN;
  LPoly series_prefix;
  int prefix_order = 0;
  std::vector<std::string> provenance;
  nlohmann::json checks = nlohmann::json::object();
};

inline nlohmann::json to_json(const InvariantResult& res) {
  nlohmann::json j;
  j["surface"] = res.surface;
  j["c1"] = res.c1;
  j["L"] = res.L;
  j["r"] = res.r;
  j["numerator"] = lpoly_to_json(res.closed.stripped_numerator());
  j["lambda_pow"] = res.closed.lambda_pow();
  j["one_minus_l4_pow"] = res.closed.one_minus_l4_pow();
  j["equiv_threshold"] = res.exact ? nlohmann::json(nullptr) : nlohmann::json(res.equiv_threshold);
  j["series_prefix"] = {{"order", res.prefix_order}, {"coeffs", lpoly_to_json(res.series_prefix)}};
  j["checks"] = res.checks;
  j["provenance"] = res.provenance;
  return j;
}

inline PPoly ppoly_scaled(const PPoly& p, const LPoly& f) {
  PPoly r;
  for (auto& [j, c] : p) {
    LPoly v = c * f;
    if (!v.is_zero()) r[j] = v;
  }
  return r;
}

inline PPoly ppoly_shift(const PPoly& p, int k) {
  PPoly r;
  for (auto& [j, c] : p) r[j + k] = c;
  return r;
}

namespace detail {

inline void check_depth(int value, int limit, const std::string& what) {
  if (value > limit)
    throw DepthLimitError(what + " = " + std::to_string(value) + " exceeds the configured maximum " + std::to_string(limit));
}

// Asserts <omega, K> < 0 for a polarization used by a wall sum.
inline void check_polarization(const SurfaceClass& omega) {
  if (!(pair(omega, SurfaceClass::K(omega.surface())) < 0))
    throw ArgumentError("polarization " + omega.str() + " does not satisfy <omega, K> < 0");
}

// Fills the series prefix and checks that the exponents are -c1^2 mod 4.
inline void finalize(InvariantResult& res, const Rat& c1sq) {
  const int residue = static_cast<int>(((-c1sq.get_num().get_si()) % 4 + 4) % 4);
  for (auto& [e, v] : res.closed.full_numerator().terms())
    if (((e - residue) % 4 + 4) % 4 != 0)
      throw ComputationError(res.surface + ": exponent " + std::to_string(e) + " of the result is not -c1^2 mod 4");
  res.prefix_order = std::max(20, res.exact ? 0 : res.equiv_threshold + 8);
  res.series_prefix = res.closed.series(res.prefix_order).p;
  res.checks["exponent_support"] = true;
}

// Union of wall lists (same xi carries the same weight in every list).
inline std::vector<Wall> merge_walls(const std::vector<std::vector<Wall>>& lists) {
  std::map<SurfaceClass, Rat> m;
  for (auto& ws : lists)
    for (auto& w : ws) m.emplace(w.xi, w.weight);
  std::vector<Wall> out;
  for (auto& [xi, wt] : m) out.push_back({xi, wt});
  return out;
}

inline long to_long(const Rat& v, const char* what) {
  if (!is_integer(v)) throw ArgumentError(std::string(what) + " must be integral, got " + rat_to_string(v));
  return v.get_num().get_si();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The one-point blowup of P2 in the chamber of H.

// chi^{hatP2,H}_{c1}(L, rpoly) for c1 in {0, F} and L = nF + mG, m in {0,1,2}:
// the F_+ closed form plus the weighted wallcrossing terms of the walls between
// F_+ and H.  With trace != nullptr the wall terms are written as JSON lines.
inline LambdaRational chi_hatP2_H(const SurfaceClass& c1, const SurfaceClass& L, const PPoly& rpoly,
                                  std::ostream* trace = nullptr) {
  const Surface& X = hatP2();
  if (&c1.surface() != &X || &L.surface() != &X) throw ArgumentError("chi_hatP2_H: classes must live on hatP2");
  const SurfaceClass F = SurfaceClass::named(X, "F"), G = SurfaceClass::named(X, "G");
  BoundaryC1 bc;
  if (c1.is_zero()) bc = BoundaryC1::Zero;
  else if (c1 == F) bc = BoundaryC1::F;
  else throw ArgumentError("chi_hatP2_H: c1 must be 0 or F, got " + c1.str());
  const Rat mr = pair(L, F), n = pair(L, G);
  if (!is_integer(mr) || mr < 0 || mr > 2) throw ArgumentError("chi_hatP2_H: unsupported L = " + L.str());
  const int m = static_cast<int>(mr.get_num().get_si());
  std::set<int> js;
  for (auto& [j, c] : rpoly)
    if (!c.is_zero()) js.insert(j);
  if (js.empty()) return LambdaRational();
  for (int j : js)
    if (j < 0) throw ArgumentError("chi_hatP2_H: negative point power");
  detail::check_polarization(F);
  detail::check_polarization(SurfaceClass::named(X, "H"));
  const auto closed = fplus_closed_many(bc, n, m, js);
  LambdaRational total;
  for (int j : js) total += closed.at(j) * LambdaRational(rpoly.at(j));
  std::vector<std::vector<Wall>> lists;
  for (int j : js) lists.push_back(walls_hatP2_F_to_H(c1, L, j));
  total += LambdaRational(wall_sum(detail::merge_walls(lists), L, rpoly, trace));
  return total;
}

inline InvariantResult chi_hatP2_H(const SurfaceClass& c1, const SurfaceClass& L, int r, std::ostream* trace = nullptr) {
  InvariantResult res;
  res.surface = "hatP2";
  res.c1 = c1.str();
  res.L = L.str();
  res.r = r;
  res.closed = chi_hatP2_H(c1, L, ppoly_monomial(r), trace);
  res.provenance = {"F_+ closed form", "walls between F_+ and H"};
  detail::finalize(res, square(c1));
  return res;
}

// ---------------------------------------------------------------------------
// P2.

// chi^{P2,H}_{c1}(nH, rpoly) via the blowdown with the Bezout certificate of
// (S_k, S_{k+1}) for c1 = H or (R_k, R_{k+1}) for c1 = 0.  k = n always works;
// k = n - 1 uses L = (n-1)F + 2G on the blowup, whose closed form and wall list
// exist only for point powers up to 2n - 2 (an error is raised beyond).
inline LambdaRational chi_P2_poly(P2C1 c1, int n, const PPoly& rpoly, std::optional<int> k_opt = std::nullopt,
                                  std::ostream* trace = nullptr) {
  if (n < 1) throw ArgumentError("chi_P2: n must be positive");
  const int k = k_opt.value_or(n);
  if (k < 1 || (k != n && k != n - 1)) throw ArgumentError("chi_P2: Bezout index must be n or n-1");
  detail::check_depth(n, pipeline_limits().p2_max_n, "chi_P2: n");
  for (auto& [j, c] : rpoly) {
    if (c.is_zero()) continue;
    if (j < 0) throw ArgumentError("chi_P2: negative point power");
    if (c1 == P2C1::H && (n - j) % 2 != 0)
      throw ArgumentError("chi_P2: parity violated, c1 = H needs n = r mod 2 (n = " + std::to_string(n) +
                          ", r = " + std::to_string(j) + ")");
    if (c1 == P2C1::Zero && j % 2 != 0)
      throw ArgumentError("chi_P2: parity violated, c1 = 0 needs r even (r = " + std::to_string(j) + ")");
  }
  const BezoutKind kind = c1 == P2C1::H ? BezoutKind::S : BezoutKind::R;
  const BezoutCert cert = bezout(kind, k, k + 1);
  const Surface& X = hatP2();
  const SurfaceClass H = SurfaceClass::named(X, "H"), E = SurfaceClass::named(X, "E");
  const SurfaceClass c1hat = c1 == P2C1::H ? SurfaceClass::named(X, "F") : SurfaceClass::zero(X);
  const SurfaceClass L1 = H * n - E * (k - 1), L2 = H * n - E * k;
  LambdaRational sum = chi_hatP2_H(c1hat, L1, ppoly_mul(rpoly, ppoly_from_bipoly(cert.h)), trace) +
                       chi_hatP2_H(c1hat, L2, ppoly_mul(rpoly, ppoly_from_bipoly(cert.l)), trace);
  return sum.divided(kind == BezoutKind::S ? 1 : 0, cert.N);
}

inline InvariantResult chi_P2(P2C1 c1, int n, int r, std::optional<int> k = std::nullopt, std::ostream* trace = nullptr) {
  InvariantResult res;
  res.surface = "P2";
  res.c1 = to_string(c1);
  res.L = std::to_string(n) + "H";
  res.r = r;
  res.closed = chi_P2_poly(c1, n, ppoly_monomial(r), k, trace);
  const int kk = k.value_or(n);
  res.provenance = {std::string("Bezout certificate of ") + (c1 == P2C1::H ? "S" : "R") + "_" + std::to_string(kk) +
                        ", " + (c1 == P2C1::H ? "S" : "R") + "_" + std::to_string(kk + 1),
                    "hatP2 in the chamber of H: F_+ closed forms and walls", "blowdown to P2"};
  detail::finalize(res, Rat(c1 == P2C1::H ? 1 : 0));
  return res;
}

// ---------------------------------------------------------------------------
// Blowups of P2 near H.

namespace detail {

// Largest Lambda-degree of a wallcrossing term between H and
// omega = H - sum alpha_i E_i (alpha_i > 0 small enough).  Such walls are
// xi = -sum b_i E_i of type c1; the criterion -xi^2 <= |<xi, L-K>| + r + 2
// reads sum b_i^2 <= |sum b_i (m_i + 1)| + r + 2.  Returns INT_MIN if none.
inline int blowup_threshold(const SurfaceClass& c1, const SurfaceClass& L, int r) {
  const Surface& X = L.surface();
  const int s = X.rank() - 1;
  std::vector<long> v(s);
  for (int i = 0; i < s; ++i) v[i] = std::labs(-L.doubled()[i + 1] / 2 + 1);
  // b^2 - |b| v >= -v^2/4, so the remaining coordinates can lower the sum by
  // at most rest[i]
  std::vector<long> rest(s + 1, 0);
  for (int i = s - 1; i >= 0; --i) rest[i] = rest[i + 1] + (v[i] * v[i] + 3) / 4;
  const long slack = r + 2 + rest[0] + 1;
  const SurfaceClass LK = L - SurfaceClass::K(X);
  int best = INT_MIN;
  std::vector<long> b(s, 0);
  std::function<void(int, long)> rec = [&](int i, long partial) {
    if (i == s) {
      if (std::all_of(b.begin(), b.end(), [](long x) { return x == 0; })) return;
      std::vector<long> coords(s + 1, 0);
      for (int t = 0; t < s; ++t) coords[t + 1] = -b[t];
      const SurfaceClass xi = SurfaceClass::of(X, coords);
      if (!(xi + c1).divisible_by_two() || !wall_may_contribute(xi, L, r)) return;
      const long A = to_long(square(xi), "xi^2") + 2 * std::labs(to_long(pair(xi, LK), "<xi,L-K>")) + 2L * r + 4;
      best = std::max(best, static_cast<int>(A));
      return;
    }
    const long B = v[i] + slack;
    for (long x = -B; x <= B; ++x) {
      const long term = x * x - std::labs(x) * v[i];
      if (partial + term - rest[i + 1] > r + 2) continue;
      b[i] = x;
      rec(i + 1, partial + term);
    }
    b[i] = 0;
  };
  rec(0, 0);
  return best;
}

}  // namespace detail

// chi^{X,H}_{c1}(L, P^r) on the blowup X of P2 in s points, L = dH - sum m_i E_i,
// c1 = kH + sum l_i E_i: the invariant of P2 with c1 = kH mod 2 and the point
// insertion P^r prod S_{m_i+1} (l_i odd) prod R_{m_i+1} (l_i even).  This is the
// invariant at H; for omega = H - sum alpha_i E_i with small alpha_i > 0 it
// agrees above equiv_threshold.
inline InvariantResult chi_blowup_P2(const SurfaceClass& c1, const SurfaceClass& L, int r, std::ostream* trace = nullptr) {
  const Surface& X = L.surface();
  if (&c1.surface() != &X) throw ArgumentError("chi_blowup_P2: c1 and L on different surfaces");
  if (&X != &blowup_P2(X.rank() - 1))
    throw ArgumentError("chi_blowup_P2: not a blowup of P2");
  if (!L.is_integral() || !c1.is_integral()) throw ArgumentError("chi_blowup_P2: c1 and L must be integral");
  if (r < 0) throw ArgumentError("chi_blowup_P2: negative point power");
  const Rat c1L = pair(c1, L);
  if (!is_integer((c1L - r) / 2)) throw ArgumentError("chi_blowup_P2: parity violated, <c1,L> != r mod 2");
  const int s = X.rank() - 1;
  const long d = L.doubled()[0] / 2;
  PPoly prod = ppoly_monomial(r);
  for (int i = 0; i < s; ++i) {
    const long mi = -L.doubled()[i + 1] / 2;
    if (mi < 0) throw ArgumentError("chi_blowup_P2: multiplicities m_i of L = dH - sum m_i E_i must be nonnegative");
    const bool odd = (c1.doubled()[i + 1] / 2) % 2 != 0;
    const BiPoly f = odd ? S(static_cast<int>(mi + 1)) : R(static_cast<int>(mi + 1));
    prod = ppoly_mul(prod, ppoly_from_bipoly(f));
  }
  const bool kodd = (c1.doubled()[0] / 2) % 2 != 0;
  InvariantResult res;
  res.surface = X.name;
  res.c1 = c1.str();
  res.L = L.str();
  res.r = r;
  if (d < 1) throw ArgumentError("chi_blowup_P2: the degree d of L must be positive");
  res.closed = prod.empty() ? LambdaRational() : chi_P2_poly(kodd ? P2C1::H : P2C1::Zero, static_cast<int>(d), prod, std::nullopt, trace);
  res.exact = false;
  res.equiv_threshold = detail::blowup_threshold(c1, L, r);
  if (res.equiv_threshold == INT_MIN) res.exact = true;  // no wall separates H from nearby omega
  res.provenance = {"blowup formulas down to P2", "P2 invariant with point-class polynomial",
                    "walls near H bounded for the threshold"};
  detail::finalize(res, square(c1));
  return res;
}

// ---------------------------------------------------------------------------
// P1xP1.

namespace detail {

inline Rat p1p1_c1_square(P1P1C1 c) { return Rat(c == P1P1C1::FG ? 2 : 0); }

inline SurfaceClass tildeP2_c1(P1P1C1 c) {
  const Surface& Y = tildeP2();
  switch (c) {
    case P1P1C1::Zero: return SurfaceClass::zero(Y);
    case P1P1C1::F: return parse_class(Y, "H-E1");
    case P1P1C1::G: return parse_class(Y, "H-E2");
    case P1P1C1::FG: return parse_class(Y, "2H-E1-E2");
  }
  return SurfaceClass::zero(Y);
}

// Weighted wall sum between H and F+G on the two-point blowup.
inline LambdaRational tildeP2_walls(const SurfaceClass& c1, const SurfaceClass& L, const PPoly& rpoly, std::ostream* trace) {
  check_polarization(SurfaceClass::named(tildeP2(), "H"));
  check_polarization(parse_class(tildeP2(), "2H-E1-E2"));
  std::vector<std::vector<Wall>> lists;
  bool any = false;
  for (auto& [j, c] : rpoly)
    if (!c.is_zero()) {
      lists.push_back(walls_tildeP2_H_to_FG(c1, L, j));
      any = true;
    }
  if (!any) return LambdaRational();
  return LambdaRational(wall_sum(merge_walls(lists), L, rpoly, trace));
}

}  // namespace detail

// chi^{P1xP1,F+G}_{c1}(d(F+G)) for c1 in {0, F, G, F+G}, exactly:
//  1. on the two-point blowup (E = H - E1 - E2 the exceptional curve over
//     P1xP1) the invariants at H of d(F+G) - dE = dH and of
//     d(F+G) - (d-1)E = (d+1)H - E1 - E2 come from P2 by the blowup formulas
//     (S_1 = Lambda, S_2 = P Lambda, R_2 = 1 - Lambda^4);
//  2. the walls between H and F+G are crossed;
//  3. a Bezout certificate of (S_d, S_{d+1}) (c1 = 0, F+G) or (R_d, R_{d+1})
//     (c1 = F) blows the exceptional curve down.
inline InvariantResult chi_P1P1_diag(P1P1C1 c1, int d, std::ostream* trace = nullptr) {
  if (d < 1) throw ArgumentError("chi_P1P1_diag: d must be positive");
  if (c1 == P1P1C1::F || c1 == P1P1C1::G)
    if (d % 2 != 0) throw ArgumentError("chi_P1P1_diag: parity violated, <c1,L> = d must be even for c1 = F, G");
  detail::check_depth(d, pipeline_limits().p1p1_max_d, "chi_P1P1_diag: d");
  if (c1 == P1P1C1::G) {
    InvariantResult res = chi_P1P1_diag(P1P1C1::F, d, trace);
    res.c1 = "G";
    res.provenance.push_back("F <-> G symmetry");
    return res;
  }
  const Surface& Y = tildeP2();
  const SurfaceClass H = SurfaceClass::named(Y, "H");
  const SurfaceClass Ld = H * d, Ld1 = parse_class(Y, std::to_string(d + 1) + "H-E1-E2");
  const bool useS = c1 != P1P1C1::F;
  const BezoutCert cert = bezout(useS ? BezoutKind::S : BezoutKind::R, d, d + 1);
  const PPoly pf = ppoly_from_bipoly(cert.h);  // pairs with index d: L = d(F+G) - (d-1)E
  const PPoly pg = ppoly_from_bipoly(cert.l);  // pairs with index d+1: L = d(F+G) - dE
  // class of type c1 + E (S) or c1 (R) on the blowup
  SurfaceClass wc1;
  LPoly fac_d, fac_d1;  // prefactors of the P2 invariants
  int shift_d1 = 0;     // point-power shift for (d+1)H - E1 - E2
  const LPoly L1 = LPoly::monomial(Rat(1), 1), L2 = LPoly::monomial(Rat(1), 2);
  switch (c1) {
    case P1P1C1::Zero:  // E = H - E1 - E2: S_1 S_1 on dH, S_2 S_2 on (d+1)H - E1 - E2
      wc1 = parse_class(Y, "H-E1-E2");
      fac_d = L2;
      fac_d1 = L2;
      shift_d1 = 2;
      break;
    case P1P1C1::F:  // F = H - E1: S_1 R_1, resp. S_2 R_2
      wc1 = parse_class(Y, "H-E1");
      fac_d = L1;
      fac_d1 = L1 * LPoly::one_minus_l4_pow(1);
      shift_d1 = 1;
      break;
    default:  // F + G - E = H: R_1 R_1, resp. R_2 R_2
      wc1 = H;
      fac_d = LPoly(1);
      fac_d1 = LPoly::one_minus_l4_pow(2);
      shift_d1 = 0;
      break;
  }
  // chi^{tildeP2,F+G}(L_{d+1}, pf) + chi^{tildeP2,F+G}(L_d, pg)
  LambdaRational total;
  if (!pf.empty()) {
    total += LambdaRational(fac_d1) * chi_P2_poly(P2C1::H, d + 1, ppoly_shift(pf, shift_d1), std::nullopt, trace);
    total += detail::tildeP2_walls(wc1, Ld1, pf, trace);
  }
  if (!pg.empty()) {
    total += LambdaRational(fac_d) * chi_P2_poly(P2C1::H, d, pg, std::nullopt, trace);
    total += detail::tildeP2_walls(wc1, Ld, pg, trace);
  }
  InvariantResult res;
  res.surface = "P1xP1";
  res.c1 = to_string(c1);
  res.L = std::to_string(d) + "F+" + std::to_string(d) + "G";
  res.r = 0;
  res.closed = total.divided(useS ? 1 : 0, cert.N);
  res.provenance = {"blowup formulas from P2 to the two-point blowup at H", "walls between H and F+G",
                    std::string("blowdown with the Bezout certificate of ") + (useS ? "S" : "R") + "_" +
                        std::to_string(d) + ", " + (useS ? "S" : "R") + "_" + std::to_string(d + 1)};
  detail::finalize(res, detail::p1p1_c1_square(c1));
  return res;
}

// chi^{P1xP1,F+G}_{c1}(nF + mG, P^r): on the two-point blowup
// nF + mG = (n+m)H - nE1 - mE2, so the invariant at H is a P2 invariant with the
// insertion P^r R/S_{n+1} R/S_{m+1}; adding the walls between H and F+G gives
// the invariant at F+G, which equals the one on P1xP1 (R_1 = 1).  For any other
// ample class on P1xP1 the result holds up to finitely many initial terms.
inline InvariantResult chi_P1P1_general(P1P1C1 c1, int n, int m, int r, std::ostream* trace = nullptr) {
  if (n < 0 || m < 0 || n + m < 1) throw ArgumentError("chi_P1P1_general: need n, m >= 0 and n + m >= 1");
  if (r < 0) throw ArgumentError("chi_P1P1_general: negative point power");
  const bool sF = c1 == P1P1C1::F || c1 == P1P1C1::FG;
  const bool sG = c1 == P1P1C1::G || c1 == P1P1C1::FG;
  const int c1L = (sF ? m : 0) + (sG ? n : 0);
  if ((c1L - r) % 2 != 0) throw ArgumentError("chi_P1P1_general: parity violated, <c1,L> != r mod 2");
  PPoly prod = ppoly_monomial(r);
  prod = ppoly_mul(prod, ppoly_from_bipoly(sF ? S(n + 1) : R(n + 1)));
  prod = ppoly_mul(prod, ppoly_from_bipoly(sG ? S(m + 1) : R(m + 1)));
  const bool kodd = sF != sG;  // c1 = H - E1, H - E2: odd H-coefficient
  const Surface& Y = tildeP2();
  const SurfaceClass L = SurfaceClass::of(Y, {n + m, -n, -m});
  LambdaRational total = chi_P2_poly(kodd ? P2C1::H : P2C1::Zero, n + m, prod, std::nullopt, trace);
  total += detail::tildeP2_walls(detail::tildeP2_c1(c1), L, ppoly_monomial(r), trace);
  InvariantResult res;
  res.surface = "P1xP1";
  res.c1 = to_string(c1);
  res.L = std::to_string(n) + "F+" + std::to_string(m) + "G";
  res.r = r;
  res.closed = total;
  res.provenance = {"blowup formulas from P2 to the two-point blowup at H", "walls between H and F+G",
                    "blowdown of E (R_1 = 1)"};
  detail::finalize(res, detail::p1p1_c1_square(c1));
  return res;
}

// ---------------------------------------------------------------------------
// Structural checks.

// The representative p of closed modulo Laurent polynomials with the
// denominator (1 - Lambda^4)^b, b = chi, whose Lambda^4-span is smallest:
// closed = p / (1 - Lambda^4)^chi + Laurent polynomial.  Returns nullopt if the
// denominator of closed exceeds (1 - Lambda^4)^chi.
inline std::optional<LPoly> conjectural_numerator(const LambdaRational& closed, int chi) {
  const int b = closed.one_minus_l4_pow();
  if (b > chi || chi < 0) return std::nullopt;
  const LPoly N = closed.full_numerator() * LPoly::one_minus_l4_pow(chi - b);
  if (N.is_zero()) return LPoly();
  if (chi == 0) return LPoly();
  const int e0 = ((N.low() % 4) + 4) % 4;
  std::map<long, Rat> base;  // N as a polynomial in t = Lambda^4 (times Lambda^e0)
  for (auto& [e, v] : N.terms()) {
    if (((e - e0) % 4 + 4) % 4 != 0) return std::nullopt;
    base[(e - e0) / 4] += v;
  }
  std::vector<Rat> binom(chi + 1);  // coefficients of (1 - t)^chi
  {
    Int bc = 1;
    for (int i = 0; i <= chi; ++i) {
      binom[i] = Rat(bc) * ((i % 2 == 0) ? 1 : -1);
      bc = bc * (chi - i) / (i + 1);
    }
  }
  // the representative modulo (1 - t)^chi supported in t^w .. t^{w+chi-1}
  auto reduce = [&](long w) {
    std::map<long, Rat> c = base;
    while (!c.empty() && c.rbegin()->first >= w + chi) {
      auto [k, v] = *c.rbegin();
      c.erase(std::prev(c.end()));
      for (int i = 0; i < chi; ++i) c[k - chi + i] -= v * binom[i] / binom[chi];
    }
    while (!c.empty() && c.begin()->first < w) {
      auto [k, v] = *c.begin();
      c.erase(c.begin());
      for (int i = 1; i <= chi; ++i) c[k + i] -= v * binom[i];
    }
    LPoly p;
    for (auto& [k, v] : c)
      if (sgn(v) != 0) p.add_to(static_cast<int>(4 * k + e0), v);
    return p;
  };
  auto span = [](const LPoly& p) { return p.is_zero() ? -1 : p.high() - p.low(); };
  const long lo = base.begin()->first, hi = base.rbegin()->first;
  std::optional<LPoly> best;
  for (long w = lo - chi; w <= hi; ++w) {
    LPoly p = reduce(w);
    if (!best || span(p) < span(*best)) best = p;
  }
  return best;
}

inline Rat two_pow(long g) {
  if (g >= 0) return Rat(Int(1) << static_cast<unsigned long>(g));
  return Rat(Int(1), Int(1) << static_cast<unsigned long>(-g));
}

// Checks on a computed invariant: numerator at 1 equals 2^{g(L)} with
// g(L) = L(L+K)/2 + 1, denominator exponent chi(L) = L(L-K)/2 + 1, and, if a
// partner invariant for c1' = L + K - c1 is given, the duality
// P_{c1}(Lambda) = Lambda^{L^2 + 8 - K^2} P_{c1'}(1/Lambda).
inline nlohmann::json verify_conjectures(const InvariantResult& res, const SurfaceClass& L,
                                         const InvariantResult* partner = nullptr) {
  nlohmann::json out = nlohmann::json::object();
  const Surface& X = L.surface();
  const SurfaceClass K = SurfaceClass::K(X);
  const long chi = detail::to_long(pair(L, L - K) / 2 + 1, "chi(L)");
  const long g = detail::to_long(pair(L, L + K) / 2 + 1, "g(L)");
  auto p = conjectural_numerator(res.closed, static_cast<int>(chi));
  out["chi(L)"] = chi;
  out["g(L)"] = g;
  out["denominator_is_chi"] = p.has_value() && res.closed.one_minus_l4_pow() == chi;
  if (p) {
    out["numerator"] = lpoly_to_json(*p);
    out["numerator_at_1"] = rat_to_string(p->eval(Rat(1)));
    out["numerator_at_1_is_2^g"] = p->eval(Rat(1)) == two_pow(g);
  } else {
    out["numerator_at_1_is_2^g"] = false;
  }
  if (partner) {
    const long shift = detail::to_long(square(L) + 8 - square(K), "L^2+8-K^2");
    auto q = conjectural_numerator(partner->closed, static_cast<int>(chi));
    bool ok = p && q;
    if (ok) ok = *p == q->inverted().shifted(static_cast<int>(shift));
    out["duality"] = ok;
  }
  return out;
}

// Splits closed = N / (1 - Lambda^4)^b into R / (1 - Lambda^4)^b + P with P a
// Laurent polynomial and R supported in [min(0, low N), min(0, low N) + 4b).
struct ClosedSplit {
  LambdaRational fraction;
  LPoly polynomial;
};

inline ClosedSplit split_closed(const LambdaRational& closed) {
  const int b = closed.one_minus_l4_pow();
  LPoly rem = closed.full_numerator(), quot;
  if (b == 0 || rem.is_zero()) return {LambdaRational(LPoly(), 0), rem};
  const int w0 = std::min(0, rem.low());
  const LPoly den = LPoly::one_minus_l4_pow(b);
  const Rat lead = (b % 2 == 0) ? Rat(1) : Rat(-1);
  while (!rem.is_zero() && rem.high() >= w0 + 4 * b) {
    const int e = rem.high();
    const LPoly q = LPoly::monomial(rem.coeff(e) / lead, e - 4 * b);
    quot += q;
    rem -= q * den;
  }
  return {LambdaRational(rem, b), quot};
}

// Inverse of to_json (for cached results); checks and provenance are kept.
inline LPoly lpoly_from_json(const nlohmann::json& a) {
  LPoly p;
  for (auto& t : a) p.add_to(t.at(0).get<int>(), parse_rat(t.at(1).get<std::string>()));
  return p;
}

inline InvariantResult result_from_json(const nlohmann::json& j) {
  InvariantResult res;
  res.surface = j.at("surface").get<std::string>();
  res.c1 = j.at("c1").get<std::string>();
  res.L = j.at("L").get<std::string>();
  res.r = j.at("r").get<int>();
  res.closed = LambdaRational::make(lpoly_from_json(j.at("numerator")), j.at("lambda_pow").get<int>(),
                                    j.at("one_minus_l4_pow").get<int>());
  res.exact = j.at("equiv_threshold").is_null();
  if (!res.exact) res.equiv_threshold = j.at("equiv_threshold").get<int>();
  res.prefix_order = j.at("series_prefix").at("order").get<int>();
  res.series_prefix = lpoly_from_json(j.at("series_prefix").at("coeffs"));
  res.checks = j.at("checks");
  res.provenance = j.at("provenance").get<std::vector<std::string>>();
  return res;
}

}  // namespace kdi
