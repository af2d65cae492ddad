// Wallcrossing terms delta_xi(L, P^r) and weighted wall sums.
//
// delta_xi(L, P^r) is the q^0-coefficient of
//     2 i^<xi,K> Lambda^2 q^{-xi^2} y^<xi,L-K> theta4~(h)^{(L-K)^2} theta4^sigma u' h* M^r,
// a polynomial in Lambda supported in degrees -xi^2 <= d <= xi^2 + 2|<xi,L-K>| + 2r + 4
// with d = -xi^2 mod 4.  Everything but y^<xi,L-K> and M^r depends on L only, so
// the engine computes that common factor once per L, at the largest box any
// requested (xi, r) needs, and truncates it per wall.
#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kdi/blowpoly.hpp"
#include "kdi/lattice.hpp"
#include "kdi/lpoly.hpp"
#include "kdi/theta.hpp"
#include "kdi/tseries.hpp"

namespace kdi {

struct WallTerm {
  SurfaceClass xi;
  SurfaceClass L;
  int r = 0;
  LPoly value;
  int degree_bound = -1;  // xi^2 + 2|<xi,L-K>| + 2r + 4
};

namespace detail {

inline long integral(const Rat& v, const char* what) {
  if (!is_integer(v)) throw ArgumentError(std::string(what) + " must be integral, got " + rat_to_string(v));
  return v.get_num().get_si();
}

// Data of one (xi, L) pair entering the wall term.
struct WallData {
  long xi2 = 0;   // xi^2 (negative)
  long xiK = 0;   // <xi, K>
  long N = 0;     // <xi, L - K>
  long xiL = 0;   // <xi, L>
};

inline WallData wall_data(const SurfaceClass& xi, const SurfaceClass& L) {
  xi.check_same(L);
  const SurfaceClass K = SurfaceClass::K(xi.surface());
  WallData w;
  w.xi2 = integral(square(xi), "xi^2");
  if (w.xi2 >= 0) throw ArgumentError("wall term: xi^2 must be negative for xi = " + xi.str());
  w.xiK = integral(pair(xi, K), "<xi,K>");
  w.N = integral(pair(xi, L - K), "<xi,L-K>");
  w.xiL = integral(pair(xi, L), "<xi,L>");
  return w;
}

inline void check_parity(const SurfaceClass& xi, const WallData& w, int r) {
  if (r < 0) throw ArgumentError("wall term: negative point power");
  if (((w.xiL - r) % 2 + 2) % 2 != 0)
    throw ArgumentError("wall term: parity violated, <xi,L> = " + std::to_string(w.xiL) + " and r = " +
                        std::to_string(r) + " for xi = " + xi.str());
}

inline long degree_bound(const WallData& w, int r) { return w.xi2 + 2 * std::labs(w.N) + 2L * r + 4; }

inline bool may_contribute(const WallData& w, int r) { return -w.xi2 <= std::labs(w.N) + r + 2; }

// Coefficients of q^0 of i^ipow q^qshift X M^j for every requested j, each up
// to its own Lambda-degree D_j.  M^{j+2} = 4 (1 + u Lambda^2 + Lambda^4) M^j and
// the quartic has three nonzero rows, so the powers are walked up cheaply.
inline std::map<int, LPoly> coeff_q0_M_powers(const TSeries& X, ThetaContext& ctx, int ipow, int qshift,
                                              const std::map<int, int>& j_to_D) {
  std::map<int, LPoly> out;
  if (j_to_D.empty()) return out;
  const int T = X.T(), S = X.S();
  const TSeries quartic4 = ctx.quartic().truncated(T, S) * Rat(4);
  for (int eps : {0, 1}) {
    int jmax = -1;
    for (auto& [j, D] : j_to_D)
      if (j % 2 == eps) jmax = std::max(jmax, j);
    if (jmax < 0) continue;
    TSeries Z = eps == 0 ? X : X * ctx.M_t().truncated(T, S);
    for (int j = eps; j <= jmax; j += 2) {
      auto it = j_to_D.find(j);
      if (it != j_to_D.end()) out[j] = coeff_q0(Z, ipow, qshift, it->second);
      if (j + 2 <= jmax) Z = Z * quartic4;
    }
  }
  return out;
}

}  // namespace detail

// Computes wall terms for one line bundle L and many (xi, r).
class WallEngine {
 public:
  // extra: additional Lambda-degrees beyond the vanishing bound (used to check
  // that the bound is sufficient).
  explicit WallEngine(SurfaceClass L, int extra = 0) : L_(std::move(L)), extra_(extra) {
    const SurfaceClass LK = L_ - SurfaceClass::K(L_.surface());
    e_ = detail::integral(square(LK), "(L-K)^2");
  }

  const SurfaceClass& L() const { return L_; }

  // Registers (xi, r); must be called before compute().
  void request(const SurfaceClass& xi, int r) {
    const auto w = detail::wall_data(xi, L_);
    detail::check_parity(xi, w, r);
    requests_[xi].insert(r);
  }

  // Evaluates all registered requests; the results are available via get().
  void compute() {
    struct Plan {
      SurfaceClass xi;
      detail::WallData w;
      std::map<int, int> j_to_D;
      int T = 0, S = 0;
    };
    std::vector<Plan> plans;
    int T = 1, S = 0;
    for (auto& [xi, rs] : requests_) {
      Plan p{xi, detail::wall_data(xi, L_), {}, 0, 0};
      for (int r : rs) {
        if (results_.count({xi, r})) continue;
        if (!detail::may_contribute(p.w, r)) {
          results_[{xi, r}] = LPoly();
          continue;
        }
        const int D = static_cast<int>(detail::degree_bound(p.w, r)) + extra_;
        p.j_to_D[r] = D;
        p.T = std::max(p.T, D);
      }
      if (p.j_to_D.empty()) continue;
      p.S = std::max(0, static_cast<int>((p.T + p.w.xi2) / 4));
      T = std::max(T, p.T);
      S = std::max(S, p.S);
      plans.push_back(std::move(p));
    }
    if (plans.empty()) return;
    ThetaContext ctx(T, S);
    const int sigma = L_.surface().sigma;
    TSeries common = ctx.L2uprime_t() * ctx.theta4t_pow(e_);
    common = common * ctx.th4_pow(sigma);
    common = common * ctx.hstar_t();
    common = common * Rat(2);
    for (auto& p : plans) {
      const TSeries c = common.truncated(p.T, p.S);
      const TSeries yN = (ctx.h_t().truncated(p.T, p.S) * frac(p.w.N, 2)).exp();
      const TSeries X = c * yN;
      auto vals = detail::coeff_q0_M_powers(X, ctx, static_cast<int>(p.w.xiK), static_cast<int>(-p.w.xi2), p.j_to_D);
      for (auto& [r, v] : vals) results_[{p.xi, r}] = v;
    }
  }

  WallTerm get(const SurfaceClass& xi, int r) const {
    auto it = results_.find({xi, r});
    if (it == results_.end()) throw ArgumentError("WallEngine: (" + xi.str() + ", P^" + std::to_string(r) + ") not computed");
    const auto w = detail::wall_data(xi, L_);
    return WallTerm{xi, L_, r, it->second, static_cast<int>(detail::degree_bound(w, r))};
  }

 private:
  SurfaceClass L_;
  int extra_ = 0;
  long e_ = 0;
  std::map<SurfaceClass, std::set<int>> requests_;
  std::map<std::pair<SurfaceClass, int>, LPoly> results_;
};

// delta_xi(L, P^r).
inline WallTerm delta(const SurfaceClass& xi, const SurfaceClass& L, int r, int extra = 0) {
  WallEngine eng(L, extra);
  eng.request(xi, r);
  eng.compute();
  return eng.get(xi, r);
}

// The same term through the antisymmetrized integrand
//   M^r i^<xi,K> Lambda^2 q^{-xi^2} (y^N - (-1)^{xi^2} y^{-N}) theta4~(h)^{(L-K)^2} theta4^sigma u' h*,
// evaluated with its own theta context (an independent code path).
inline WallTerm delta_symmetrized(const SurfaceClass& xi, const SurfaceClass& L, int r) {
  const auto w = detail::wall_data(xi, L);
  detail::check_parity(xi, w, r);
  const int D = static_cast<int>(detail::degree_bound(w, r));
  WallTerm out{xi, L, r, LPoly(), D};
  if (!detail::may_contribute(w, r)) return out;
  const int S = std::max(0, static_cast<int>((D + w.xi2) / 4));
  ThetaContext ctx(std::max(D, 1), S);
  const long e = detail::integral(square(L - SurfaceClass::K(L.surface())), "(L-K)^2");
  const int n = static_cast<int>(w.N);
  TSeries ys = (w.xi2 % 2 == 0) ? ctx.exp_lh_t(n) - ctx.exp_lh_t(-n) : ctx.exp_lh_t(n) + ctx.exp_lh_t(-n);
  TSeries X = ctx.M_pow(r) * ys;
  X = X * ctx.L2uprime_t();
  X = X * ctx.theta4t_pow(e);
  X = X * ctx.th4_pow(L.surface().sigma);
  X = X * ctx.hstar_t();
  out.value = coeff_q0(X, static_cast<int>(w.xiK), static_cast<int>(-w.xi2), D);
  return out;
}

inline nlohmann::json lpoly_to_json(const LPoly& p) {
  nlohmann::json a = nlohmann::json::array();
  for (auto& [e, c] : p.terms()) a.push_back({e, rat_to_string(c)});
  return a;
}

inline nlohmann::json wall_term_to_json(const WallTerm& t, const Rat& weight) {
  return {{"xi", t.xi.str()},     {"L", t.L.str()},          {"r", t.r},
          {"A", t.degree_bound},  {"weight", rat_to_string(weight)}, {"delta", lpoly_to_json(t.value)}};
}

// sum over walls and monomials Lambda^i P^j of rpoly of weight * Lambda^i * delta_xi(L, P^j).
// With trace != nullptr one JSON line per (wall, j) is written.
inline LPoly wall_sum(const std::vector<Wall>& walls, const SurfaceClass& L, const PPoly& rpoly,
                      std::ostream* trace = nullptr) {
  LPoly total;
  if (walls.empty() || rpoly.empty()) return total;
  WallEngine eng(L);
  for (auto& w : walls)
    for (auto& [j, c] : rpoly)
      if (!c.is_zero()) eng.request(w.xi, j);
  eng.compute();
  for (auto& w : walls)
    for (auto& [j, c] : rpoly) {
      if (c.is_zero()) continue;
      WallTerm t = eng.get(w.xi, j);
      if (trace) *trace << wall_term_to_json(t, w.weight).dump() << "\n";
      total += (c * t.value) * w.weight;
    }
  return total;
}

}  // namespace kdi
