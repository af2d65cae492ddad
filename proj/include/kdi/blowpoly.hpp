// Blowup polynomials R_n, S_n in Z[lambda^4, x] (S_n with an overall factor
// lambda), their identities, and Bezout combinations
//     h P_n + l P_m = lambda^eps (1 - lambda^4)^N
// with minimal N.  Throughout, t stands for lambda^4.
#pragma once

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kdi/lpoly.hpp"
#include "kdi/series.hpp"
#include "kdi/theta.hpp"
#include "kdi/upoly.hpp"

namespace kdi {

// lambda^eps * sum_j c_j(t) x^j with eps = odd_lambda ? 1 : 0.
class BiPoly {
 public:
  BiPoly() = default;
  explicit BiPoly(std::vector<UPoly> cx, bool odd_lambda = false) : cx_(std::move(cx)), odd_(odd_lambda) {
    trim();
  }
  static BiPoly constant(const UPoly& c, bool odd_lambda = false) { return BiPoly({c}, odd_lambda); }
  static BiPoly x_pow(int j, const UPoly& c = UPoly(1)) {
    std::vector<UPoly> v(j + 1);
    v[j] = c;
    return BiPoly(std::move(v));
  }

  bool odd_lambda() const { return odd_; }
  BiPoly with_odd_lambda(bool f) const { return BiPoly(cx_, f); }
  bool is_zero() const { return cx_.empty(); }
  int x_degree() const { return static_cast<int>(cx_.size()) - 1; }
  int t_degree() const {
    int d = -1;
    for (auto& c : cx_) d = std::max(d, c.deg());
    return d;
  }
  const UPoly& xcoeff(int j) const {
    static const UPoly zero;
    return (j >= 0 && j <= x_degree()) ? cx_[j] : zero;
  }
  Rat coeff(int i, int j) const { return xcoeff(j).coeff(i); }
  const std::vector<UPoly>& xcoeffs() const { return cx_; }

  // Parity of the x-support: 0 even, 1 odd, -1 mixed (zero counts as even).
  int x_parity() const {
    bool ev = false, od = false;
    for (int j = 0; j <= x_degree(); ++j)
      if (!cx_[j].is_zero()) (j % 2 ? od : ev) = true;
    if (ev && od) return -1;
    return od ? 1 : 0;
  }

  BiPoly operator+(const BiPoly& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (odd_ != o.odd_) throw ComputationError("BiPoly: adding polynomials with different lambda parity");
    std::vector<UPoly> r(std::max(cx_.size(), o.cx_.size()));
    for (size_t j = 0; j < r.size(); ++j) r[j] = xcoeff(static_cast<int>(j)) + o.xcoeff(static_cast<int>(j));
    return BiPoly(std::move(r), odd_);
  }
  BiPoly operator-() const {
    BiPoly r = *this;
    for (auto& c : r.cx_) c = -c;
    return r;
  }
  BiPoly operator-(const BiPoly& o) const { return *this + (-o); }
  BiPoly operator*(const UPoly& s) const {
    std::vector<UPoly> r(cx_.size());
    for (size_t j = 0; j < r.size(); ++j) r[j] = cx_[j] * s;
    return BiPoly(std::move(r), odd_);
  }
  BiPoly operator*(const BiPoly& o) const {
    if (odd_ && o.odd_)
      throw ComputationError("BiPoly: lambda^2 is not representable in Q[lambda^4, x] * {1, lambda}");
    if (is_zero() || o.is_zero()) return BiPoly({}, odd_ || o.odd_);
    std::vector<UPoly> r(cx_.size() + o.cx_.size() - 1);
    for (size_t i = 0; i < cx_.size(); ++i) {
      if (cx_[i].is_zero()) continue;
      for (size_t j = 0; j < o.cx_.size(); ++j)
        if (!o.cx_[j].is_zero()) r[i + j] += cx_[i] * o.cx_[j];
    }
    return BiPoly(std::move(r), odd_ || o.odd_);
  }
  friend bool operator==(const BiPoly& a, const BiPoly& b) {
    return a.cx_ == b.cx_ && (a.is_zero() || a.odd_ == b.odd_);
  }
  friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

  // Exact division in Q[t][x] (the lambda flag of the quotient is the
  // difference of the flags).  Throws on a nonzero remainder.
  BiPoly exact_div(const BiPoly& d) const {
    if (d.is_zero()) throw ComputationError("BiPoly: division by zero");
    if (d.odd_ && !odd_) throw ComputationError("BiPoly: quotient would carry lambda^-1");
    std::vector<UPoly> rem = cx_;
    const int dd = d.x_degree();
    std::vector<UPoly> quo(std::max(0, x_degree() - dd + 1));
    for (int k = x_degree(); k >= dd; --k) {
      if (rem[k].is_zero()) continue;
      UPoly q, r;
      rem[k].divmod(d.cx_[dd], &q, &r);
      if (!r.is_zero()) throw ComputationError("BiPoly: inexact division");
      quo[k - dd] = q;
      for (int j = 0; j <= dd; ++j)
        if (!d.cx_[j].is_zero()) rem[k - dd + j] -= q * d.cx_[j];
    }
    for (int k = 0; k < dd && k <= x_degree(); ++k)
      if (!rem[k].is_zero()) throw ComputationError("BiPoly: inexact division");
    return BiPoly(std::move(quo), odd_ != d.odd_);
  }

  // Monomials lambda^{4i+eps} x^j as (lambda-exponent, x-exponent, coefficient).
  std::vector<std::tuple<int, int, Rat>> lambda_terms() const {
    std::vector<std::tuple<int, int, Rat>> out;
    for (int j = 0; j <= x_degree(); ++j)
      for (int i = 0; i <= cx_[j].deg(); ++i)
        if (sgn(cx_[j].coeff(i)) != 0) out.emplace_back(4 * i + (odd_ ? 1 : 0), j, cx_[j].coeff(i));
    return out;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    if (odd_) os << "L*(";
    bool first = true;
    for (int j = 0; j <= x_degree(); ++j) {
      if (cx_[j].is_zero()) continue;
      if (!first) os << " + ";
      os << "(" << cx_[j].str("L^4") << ")";
      if (j) os << "*x" << (j > 1 ? "^" + std::to_string(j) : "");
      first = false;
    }
    if (odd_) os << ")";
    return os.str();
  }

 private:
  void trim() {
    while (!cx_.empty() && cx_.back().is_zero()) cx_.pop_back();
  }
  std::vector<UPoly> cx_;
  bool odd_ = false;
};

// ---- JSON: {"odd_lambda": bool, "terms": [[i, j, "num/den"], ...]} (t^i x^j) ----
inline nlohmann::json bipoly_to_json(const BiPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (int j = 0; j <= p.x_degree(); ++j)
    for (int i = 0; i <= p.xcoeff(j).deg(); ++i)
      if (sgn(p.coeff(i, j)) != 0) terms.push_back({i, j, rat_to_string(p.coeff(i, j))});
  return {{"odd_lambda", p.odd_lambda()}, {"terms", terms}};
}
inline BiPoly bipoly_from_json(const nlohmann::json& js) {
  std::map<int, std::map<int, Rat>> m;
  int xd = -1;
  for (auto& t : js.at("terms")) {
    int i = t.at(0).get<int>(), j = t.at(1).get<int>();
    if (i < 0 || j < 0) throw ArgumentError("BiPoly JSON: negative exponent");
    m[j][i] = parse_rat(t.at(2).get<std::string>());
    xd = std::max(xd, j);
  }
  std::vector<UPoly> cx(xd + 1);
  for (auto& [j, row] : m) {
    int td = row.rbegin()->first;
    std::vector<Rat> c(td + 1, Rat(0));
    for (auto& [i, v] : row) c[i] = v;
    cx[j] = UPoly(std::move(c));
  }
  return BiPoly(std::move(cx), js.at("odd_lambda").get<bool>());
}

// Polynomial in the point class P with Laurent-polynomial coefficients in
// Lambda: {j: f_j(Lambda)} stands for sum_j f_j(Lambda) P^j.
using PPoly = std::map<int, LPoly>;

inline PPoly ppoly_from_bipoly(const BiPoly& p) {
  PPoly r;
  for (auto& [le, j, c] : p.lambda_terms()) r[j].add_to(le, c);
  for (auto it = r.begin(); it != r.end();) it = it->second.is_zero() ? r.erase(it) : std::next(it);
  return r;
}
inline PPoly ppoly_mul(const PPoly& a, const PPoly& b) {
  PPoly r;
  for (auto& [i, f] : a)
    for (auto& [j, g] : b) r[i + j] += f * g;
  for (auto it = r.begin(); it != r.end();) it = it->second.is_zero() ? r.erase(it) : std::next(it);
  return r;
}
inline PPoly ppoly_monomial(int j, const LPoly& c = LPoly(1)) { return PPoly{{j, c}}; }

// ---------------------------------------------------------------------------
// R_n and S_n.  Internally S_n = lambda * St_n with St_n in Z[t, x].
class BlowupPolys {
 public:
  static BlowupPolys& instance() {
    static BlowupPolys inst;
    return inst;
  }

  BiPoly R(int n) {
    std::lock_guard<std::mutex> lk(mu_);
    return R_locked(n < 0 ? -n : n);
  }
  // S_n including its lambda factor (odd_lambda = true).
  BiPoly S(int n) {
    std::lock_guard<std::mutex> lk(mu_);
    BiPoly s = St_locked(n < 0 ? -n : n);
    return (n < 0 ? -s : s).with_odd_lambda(true);
  }
  // S_n / lambda.
  BiPoly S_tilde(int n) {
    std::lock_guard<std::mutex> lk(mu_);
    BiPoly s = St_locked(n < 0 ? -n : n);
    return n < 0 ? -s : s;
  }

 private:
  BlowupPolys() {
    R_[0] = R_[1] = BiPoly::constant(UPoly(1));
    St_[0] = BiPoly();
    St_[1] = BiPoly::constant(UPoly(1));
    St_[2] = BiPoly::x_pow(1);
  }
  static UPoly t() { return UPoly::monomial(Rat(1), 1); }

  const BiPoly& R_locked(int n) {
    auto it = R_.find(n);
    if (it != R_.end()) return it->second;
    // R_n = (R_{n-1}^2 - t St_{n-1}^2) / R_{n-2}
    BiPoly a = R_locked(n - 1), b = St_locked(n - 1), c = R_locked(n - 2);
    BiPoly num = a * a - (b * b) * t();
    return R_[n] = num.exact_div(c);
  }
  const BiPoly& St_locked(int n) {
    auto it = St_.find(n);
    if (it != St_.end()) return it->second;
    // St_n = (St_{n-1}^2 - R_{n-1}^2) / St_{n-2}   (n >= 3)
    BiPoly a = St_locked(n - 1), b = R_locked(n - 1), c = St_locked(n - 2);
    BiPoly num = a * a - b * b;
    return St_[n] = num.exact_div(c);
  }

  std::mutex mu_;
  std::map<int, BiPoly> R_, St_;
};

inline BiPoly R(int n) { return BlowupPolys::instance().R(n); }
inline BiPoly S(int n) { return BlowupPolys::instance().S(n); }
inline BiPoly S_tilde(int n) { return BlowupPolys::instance().S_tilde(n); }

// Representation-level invariants: R_n even in x without lambda factor;
// S_n = lambda * (x-parity (-1)^{n-1}).
inline bool check_membership(int n) {
  BiPoly r = R(n), s = S(n);
  if (r.odd_lambda() || r.x_parity() != 0) return false;
  if (!s.odd_lambda()) return false;
  if (s.is_zero()) return n == 0;
  int want = ((n % 2) + 2) % 2 == 0 ? 1 : 0;
  return s.x_parity() == want;
}

// R_{2n} = R_n^4 - S_n^4 and S_{2n} = R_n S_n (S_{n+1} R_{n-1} - R_{n+1} S_{n-1}) / lambda.
inline bool verify_doubling(int n) {
  const UPoly t = UPoly::monomial(Rat(1), 1);
  BiPoly r = R(n), s = S_tilde(n);
  BiPoly r2 = r * r, s2 = s * s;
  if (R(2 * n) != r2 * r2 - (s2 * s2) * t) return false;  // S_n^4 = t S~_n^4
  BiPoly rhs = r * s * (S_tilde(n + 1) * R(n - 1) - R(n + 1) * S_tilde(n - 1));
  return S_tilde(2 * n) == rhs;
}

namespace detail {
// p(lambda, x) as {(lambda-exponent, x-exponent): coeff}, optionally after the
// substitution lambda -> 1/lambda, x -> x / lambda^2.
inline std::map<std::pair<int, int>, Rat> lambda_expand(const BiPoly& p, bool inverted) {
  std::map<std::pair<int, int>, Rat> m;
  for (auto& [le, j, c] : p.lambda_terms()) {
    int e = inverted ? -le - 2 * j : le;
    m[{e, j}] += c;
  }
  return m;
}
}  // namespace detail

// The four inversion identities of the blowup polynomials under
// lambda -> 1/lambda, x -> x/lambda^2 for index n (both R_n and S_n checked).
inline bool verify_inversion_symmetry(int n) {
  if (n == 0) throw ArgumentError("verify_inversion_symmetry: n must be nonzero");
  const int sq = n * n;
  const int k = (n % 2 == 0) ? n / 2 : (n - 1) / 2;  // n = 2k or 2k+1
  auto scaled = [&](const BiPoly& p, int sign) {
    std::map<std::pair<int, int>, Rat> m;
    for (auto& [key, v] : detail::lambda_expand(p, false)) m[{key.first - sq, key.second}] = v * sign;
    return m;
  };
  const int sgn_k = (k % 2 == 0) ? 1 : -1;
  BiPoly r = R(n), s = S(n);
  if (n % 2 == 0) {
    return detail::lambda_expand(r, true) == scaled(r, sgn_k) &&
           detail::lambda_expand(s, true) == scaled(s, -sgn_k);
  }
  return detail::lambda_expand(r, true) == scaled(s, sgn_k) && detail::lambda_expand(s, true) == scaled(r, sgn_k);
}

// ---------------------------------------------------------------------------
// Bezout certificates.
enum class BezoutKind { R, S };

struct BezoutCert {
  int n = 0, m = 0;
  BezoutKind kind = BezoutKind::R;
  BiPoly h, l;  // h P_n + l P_m = lambda^eps (1 - t)^N
  int N = 0;
  bool in_x_squared = false;  // cofactors canonicalized as polynomials in x^2
};

namespace detail {

using RXPoly = std::vector<RatFunc>;  // polynomial in x (or x^2) over Q(t)

inline void rx_trim(RXPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}
inline RXPoly rx_sub_mul(const RXPoly& a, const RXPoly& q, const RXPoly& b) {  // a - q b
  RXPoly r = a;
  if (!q.empty() && !b.empty()) {
    if (r.size() < q.size() + b.size() - 1) r.resize(q.size() + b.size() - 1);
    for (size_t i = 0; i < q.size(); ++i) {
      if (q[i].is_zero()) continue;
      for (size_t j = 0; j < b.size(); ++j)
        if (!b[j].is_zero()) r[i + j] = r[i + j] - q[i] * b[j];
    }
  }
  rx_trim(r);
  return r;
}
inline void rx_divmod(const RXPoly& a, const RXPoly& b, RXPoly* q, RXPoly* r) {
  RXPoly rem = a;
  rx_trim(rem);
  const int db = static_cast<int>(b.size()) - 1;
  const RatFunc inv = b.back().inverse();
  RXPoly quo(std::max(0, static_cast<int>(rem.size()) - db));
  for (int k = static_cast<int>(rem.size()) - 1; k >= db; --k) {
    if (rem[k].is_zero()) continue;
    RatFunc f = rem[k] * inv;
    quo[k - db] = f;
    for (int j = 0; j <= db; ++j)
      if (!b[j].is_zero()) rem[k - db + j] = rem[k - db + j] - f * b[j];
  }
  rem.resize(std::min(static_cast<int>(rem.size()), db));
  rx_trim(rem);
  rx_trim(quo);
  *q = quo;
  *r = rem;
}

inline RXPoly to_rx(const BiPoly& p, bool squared) {
  RXPoly r;
  for (int j = 0; j <= p.x_degree(); ++j) {
    if (squared && j % 2) {
      if (!p.xcoeff(j).is_zero()) throw ComputationError("bezout: odd x-power in an even polynomial");
      continue;
    }
    r.push_back(RatFunc(p.xcoeff(j)));
  }
  rx_trim(r);
  return r;
}

// Clear the denominators (all powers of (1 - t)) of a Q(t)[x] polynomial with
// (1 - t)^N; returns the cleared coefficients.
inline std::vector<UPoly> clear_with(const RXPoly& p, int N) {
  std::vector<UPoly> out;
  const UPoly f = UPoly::one_minus_t_pow(N);
  for (auto& c : p) {
    UPoly q, r;
    (c.num() * f).divmod(c.den(), &q, &r);
    if (!r.is_zero()) throw ComputationError("bezout: cofactor does not clear with (1-L^4)^" + std::to_string(N));
    out.push_back(q);
  }
  return out;
}

// Power k with den = (t - 1)^k (monic), or -1 if den has another factor.
inline int den_power_at_one(const UPoly& den) {
  const int k = den.deg();
  UPoly tm1 = UPoly(-1) + UPoly::monomial(Rat(1), 1), p(1);
  for (int i = 0; i < k; ++i) p = p * tm1;
  return p == den ? k : -1;
}

inline BiPoly from_coeffs(const std::vector<UPoly>& c, bool squared) {
  if (!squared) return BiPoly(c);
  std::vector<UPoly> v(c.empty() ? 0 : 2 * c.size() - 1);
  for (size_t i = 0; i < c.size(); ++i) v[2 * i] = c[i];
  return BiPoly(std::move(v));
}

}  // namespace detail

// Reference method: extended Euclidean algorithm over Q(t)[x^2] followed by
// clearing of denominators.  Exact but slow beyond n ~ 7 (intermediate
// expression swell in Q(t)); used as an oracle for the default method below.
inline BezoutCert bezout_euclid(BezoutKind kind, int n, int m) {
  if (std::gcd(n, m) != 1) throw ArgumentError("bezout: indices must be coprime");
  BiPoly Pn = kind == BezoutKind::R ? R(n) : S_tilde(n);
  BiPoly Pm = kind == BezoutKind::R ? R(m) : S_tilde(m);
  // Work in Q(t)[x^2]: for kind S the even-index polynomial is multiplied by x
  // first (Sbar), and the x is moved onto its cofactor at the end.
  const BiPoly X = BiPoly::x_pow(1);
  const bool n_odd_x = Pn.x_parity() == 1, m_odd_x = Pm.x_parity() == 1;
  using detail::RXPoly;
  RXPoly r0 = detail::to_rx(n_odd_x ? Pn * X : Pn, true), r1 = detail::to_rx(m_odd_x ? Pm * X : Pm, true);
  RXPoly s0{RatFunc(UPoly(1))}, s1{}, t0{}, t1{RatFunc(UPoly(1))};
  while (!r1.empty()) {
    RXPoly q, r;
    detail::rx_divmod(r0, r1, &q, &r);
    RXPoly s2 = detail::rx_sub_mul(s0, q, s1), t2 = detail::rx_sub_mul(t0, q, t1);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.size() != 1) throw ComputationError("bezout: polynomials are not coprime over Q(L)");
  const RatFunc g = r0[0].inverse();
  for (auto& c : s0) c = c * g;
  for (auto& c : t0) c = c * g;
  int N = 0;
  for (const RXPoly* p : {&s0, &t0})
    for (auto& c : *p) {
      if (c.is_zero()) continue;
      int k = detail::den_power_at_one(c.den());
      if (k < 0) throw ComputationError("bezout: cofactor denominator is not a power of (1-L^4): " + c.den().str());
      N = std::max(N, k);
    }
  BezoutCert cert;
  cert.n = n;
  cert.m = m;
  cert.kind = kind;
  cert.N = N;
  cert.in_x_squared = (kind == BezoutKind::R);
  cert.h = detail::from_coeffs(detail::clear_with(s0, N), true);
  cert.l = detail::from_coeffs(detail::clear_with(t0, N), true);
  if (n_odd_x) cert.h = cert.h * X;
  if (m_odd_x) cert.l = cert.l * X;
  // Downward probe: with N-1 clearing must fail.
  if (N > 0) {
    bool fails = false;
    try {
      detail::clear_with(s0, N - 1);
      detail::clear_with(t0, N - 1);
    } catch (const ComputationError&) {
      fails = true;
    }
    if (!fails) throw ComputationError("bezout: (1-L^4)-power is not minimal");
  }
  // Exact re-multiplication.
  BiPoly lhs = cert.h * Pn + cert.l * Pm;
  if (lhs != BiPoly::constant(UPoly::one_minus_t_pow(N)))
    throw ComputationError("bezout: certificate does not re-multiply");
  return cert;
}

// Verifies h P_n + l P_m = lambda^eps (1 - t)^N for a certificate.
inline bool verify_bezout(const BezoutCert& c) {
  BiPoly Pn = c.kind == BezoutKind::R ? R(c.n) : S(c.n);
  BiPoly Pm = c.kind == BezoutKind::R ? R(c.m) : S(c.m);
  BiPoly lhs = c.h * Pn + c.l * Pm;
  return lhs == BiPoly::constant(UPoly::one_minus_t_pow(c.N), c.kind == BezoutKind::S);
}

namespace detail {

// Specialize a polynomial in Q[t][x^2] at t = t0, as a polynomial in X = x^2.
inline UPoly specialize_sq(const BiPoly& p, const Rat& t0) {
  std::vector<Rat> c;
  for (int j = 0; j <= p.x_degree(); j += 2) c.push_back(p.xcoeff(j).eval(t0));
  return UPoly(std::move(c));
}

// Extended Euclid over Q[X]: s a + t b = 1 with deg s < deg b, deg t < deg a.
// Returns false if gcd(a, b) is not constant.
inline bool ext_euclid_q(const UPoly& a, const UPoly& b, UPoly* s, UPoly* t) {
  UPoly r0 = a, r1 = b, s0(1), s1, t0, t1(1);
  while (!r1.is_zero()) {
    UPoly q, r;
    r0.divmod(r1, &q, &r);
    UPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.deg() != 0) return false;
  const Rat g = 1 / r0.lead();
  *s = s0 * g;
  *t = t0 * g;
  return true;
}

inline int padic_valuation(const Rat& x, const Int& p) {
  if (sgn(x) == 0) return 1 << 20;
  int v = 0;
  Int a = x.get_num(), b = x.get_den();
  while (mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
    a /= p;
    ++v;
  }
  while (mpz_divisible_p(b.get_mpz_t(), p.get_mpz_t())) {
    b /= p;
    --v;
  }
  return v;
}

// Incremental Newton interpolation.
class NewtonInterp {
 public:
  void add(const Rat& x, const Rat& y) {
    // divided differences: d_k = (d_{k-1}(new) - d_{k-1}(old)) / (x - x_{i-k})
    std::vector<Rat> row{y};
    for (size_t k = 1; k <= xs_.size(); ++k) {
      const size_t i = xs_.size();
      row.push_back((row[k - 1] - last_row_[k - 1]) / (x - xs_[i - k]));
    }
    xs_.push_back(x);
    coef_.push_back(row.back());
    last_row_ = std::move(row);
  }
  // Number of trailing zero Newton coefficients (degree stability indicator).
  int trailing_zeros() const {
    int z = 0;
    for (size_t i = coef_.size(); i-- > 0 && sgn(coef_[i]) == 0;) ++z;
    return z;
  }
  UPoly poly() const {
    UPoly r, basis(1);
    for (size_t k = 0; k < coef_.size(); ++k) {
      r += basis * coef_[k];
      basis = basis * (UPoly(-xs_[k]) + UPoly::monomial(Rat(1), 1));
    }
    return r;
  }

 private:
  std::vector<Rat> xs_, coef_, last_row_;
};

}  // namespace detail

// Default method: evaluation at t = t0 with the extended Euclidean algorithm
// over Q[x^2], pole order at t = 1 read off from the p-adic valuation at
// t0 = 1 + p, and interpolation of (1-t)^N times the cofactors until the Newton
// coefficients stabilize.  The result is certified by exact re-multiplication
// and a minimality probe.
inline BezoutCert bezout(BezoutKind kind, int n, int m) {
  if (std::gcd(n, m) != 1) throw ArgumentError("bezout: indices must be coprime");
  BiPoly Pn = kind == BezoutKind::R ? R(n) : S_tilde(n);
  BiPoly Pm = kind == BezoutKind::R ? R(m) : S_tilde(m);
  const BiPoly X = BiPoly::x_pow(1);
  const bool n_odd_x = Pn.x_parity() == 1, m_odd_x = Pm.x_parity() == 1;
  const BiPoly A = n_odd_x ? Pn * X : Pn, B = m_odd_x ? Pm * X : Pm;
  const int da = A.x_degree() / 2, db = B.x_degree() / 2;

  // Cofactor values at t0 (h has X-degree < db, l has X-degree < da).
  auto solve_at = [&](const Rat& t0, std::vector<Rat>* hv, std::vector<Rat>* lv) {
    UPoly a = detail::specialize_sq(A, t0), b = detail::specialize_sq(B, t0);
    if (a.deg() != da || b.deg() != db) return false;
    UPoly s, t;
    if (!detail::ext_euclid_q(a, b, &s, &t)) return false;
    hv->assign(std::max(db, 1), Rat(0));
    lv->assign(std::max(da, 1), Rat(0));
    for (int j = 0; j <= s.deg(); ++j) (*hv)[j] = s.coeff(j);
    for (int j = 0; j <= t.deg(); ++j) (*lv)[j] = t.coeff(j);
    return true;
  };

  // Pole order at t = 1 via two large primes.
  int N = 0;
  for (long pr : {1000003L, 998244353L}) {
    std::vector<Rat> hv, lv;
    const Int p(pr);
    if (!solve_at(Rat(1) + Rat(p), &hv, &lv)) continue;
    for (auto* v : {&hv, &lv})
      for (auto& c : *v)
        if (sgn(c) != 0) N = std::max(N, -detail::padic_valuation(c, p));
  }

  auto assemble = [&](const std::vector<detail::NewtonInterp>& I, size_t off, int cnt) {
    std::vector<UPoly> c;
    for (int j = 0; j < cnt; ++j) c.push_back(I[off + j].poly());
    return detail::from_coeffs(c, true);
  };
  const int nh = std::max(db, 1), nl = std::max(da, 1);
  const BiPoly target = BiPoly::constant(UPoly::one_minus_t_pow(N));
  std::vector<detail::NewtonInterp> interp(nh + nl);
  int stable = 0;
  long k = 0;
  const long max_points = 4L * (A.t_degree() + 1) * (B.x_degree() + A.x_degree() + 2) + 64;
  BezoutCert cert;
  cert.n = n;
  cert.m = m;
  cert.kind = kind;
  cert.in_x_squared = (kind == BezoutKind::R);
  for (long used = 0; used < max_points; ++k) {
    // points 0, -1, 2, -2, 3, -3, ... (t = 1 is the pole)
    const Rat t0 = (k == 0) ? Rat(0) : (k % 2 ? Rat(-(k + 1) / 2) : Rat(k / 2 + 1));
    std::vector<Rat> hv, lv;
    if (!solve_at(t0, &hv, &lv)) continue;
    ++used;
    const Rat scale = rat_pow(1 - t0, N);
    for (int j = 0; j < nh; ++j) interp[j].add(t0, hv[j] * scale);
    for (int j = 0; j < nl; ++j) interp[nh + j].add(t0, lv[j] * scale);
    bool all = true;
    for (auto& I : interp) all = all && I.trailing_zeros() >= 1;
    stable = all ? stable + 1 : 0;
    if (stable < 3) continue;
    BiPoly h = assemble(interp, 0, nh), l = assemble(interp, nh, nl);
    if (h * A + l * B != target) continue;  // not yet stable enough; keep sampling
    // Minimality: (1-t) must not divide both cofactors.
    const UPoly f = UPoly(1) - UPoly::monomial(Rat(1), 1);
    int Nmin = N;
    while (Nmin > 0) {
      bool divisible = true;
      for (const BiPoly* p : {&h, &l})
        for (auto& c : p->xcoeffs())
          if (!c.is_zero() && sgn(c.eval(Rat(1))) != 0) divisible = false;
      if (!divisible) break;
      std::vector<UPoly> hc, lc;
      for (auto& c : h.xcoeffs()) hc.push_back(c.is_zero() ? c : c.exact_div(f));
      for (auto& c : l.xcoeffs()) lc.push_back(c.is_zero() ? c : c.exact_div(f));
      h = BiPoly(hc);
      l = BiPoly(lc);
      --Nmin;
    }
    cert.N = Nmin;
    cert.h = n_odd_x ? h * X : h;
    cert.l = m_odd_x ? l * X : l;
    if (!verify_bezout(cert)) throw ComputationError("bezout: certificate does not re-multiply");
    return cert;
  }
  throw ComputationError("bezout: interpolation did not stabilize (pole-order estimate " + std::to_string(N) + ")");
}

// ---------------------------------------------------------------------------
// Substitution lambda -> Lambda, x -> M.

// The lambda-free part sum_j c_j(Lambda^4) M^j in the engine variables
// (Lambda^4 = s t^4); the lambda factor of odd polynomials is not included.
inline TSeries eval_poly_tseries(const BiPoly& p, ThetaContext& ctx) {
  TSeries acc(0, ctx.T(), ctx.S());
  const TSeries l4 = TSeries::monomial(Rat(1), 4, 1, ctx.T(), ctx.S());
  for (int j = 0; j <= p.x_degree(); ++j) {
    const UPoly& c = p.xcoeff(j);
    if (c.is_zero()) continue;
    TSeries cj(0, ctx.T(), ctx.S());
    TSeries pw = TSeries::constant(Rat(1), ctx.T(), ctx.S());
    for (int i = 0; i <= c.deg(); ++i) {
      if (i > 0) pw = pw * l4;
      if (sgn(c.coeff(i)) != 0) cj = cj + pw * c.coeff(i);
    }
    acc = acc + cj * ctx.M_pow(j);
  }
  return acc;
}

inline LSeries eval_poly_at_PM(const BiPoly& p, ThetaContext& ctx) {
  LSeries r = eval_poly_tseries(p, ctx).to_lseries();
  return p.odd_lambda() ? r.shifted(1) : r;
}

}  // namespace kdi
