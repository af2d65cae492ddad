// Real bivariate series engine.
//
// Every theta-function ingredient used by the wallcrossing and boundary formulas
// is a power series in t := i q^{-1} Lambda and s := q^4 with RATIONAL
// coefficients (h is odd in t, and each Lambda comes with a q^{-1}).  A monomial
// t^a s^b stands for i^a Lambda^a q^{4b-a}.  Working in (t, s) removes the
// q-exponent sparsity (only exponents = -a mod 4 occur) and the imaginary unit;
// the power of i is reinstated when a coefficient of q^0 is extracted.
//
// Truncation is a box: a TSeries knows all coefficients t^a s^b with a <= T and
// b <= S (rows a < lo vanish).
#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "kdi/lpoly.hpp"
#include "kdi/scalars.hpp"
#include "kdi/series.hpp"

namespace kdi {

// Univariate series in s, known through s^S (size S+1).
using SSeries = std::vector<Rat>;

namespace detail {

// dst[0..S] += x * y  (truncated at s^S), skipping zero coefficients.
inline void s_mac(Rat* dst, const Rat* x, const Rat* y, int S, mpq_t tmp) {
  for (int i = 0; i <= S; ++i) {
    if (mpq_sgn(x[i].get_mpq_t()) == 0) continue;
    for (int j = 0; i + j <= S; ++j) {
      if (mpq_sgn(y[j].get_mpq_t()) == 0) continue;
      mpq_mul(tmp, x[i].get_mpq_t(), y[j].get_mpq_t());
      mpq_add(dst[i + j].get_mpq_t(), dst[i + j].get_mpq_t(), tmp);
    }
  }
}

// dst[0..S] += c * x * y.
inline void s_mac_scaled(Rat* dst, const Rat& c, const Rat* x, const Rat* y, int S, mpq_t tmp) {
  if (sgn(c) == 0) return;
  for (int i = 0; i <= S; ++i) {
    if (mpq_sgn(x[i].get_mpq_t()) == 0) continue;
    mpq_mul(tmp, c.get_mpq_t(), x[i].get_mpq_t());
    Rat cx(tmp);
    for (int j = 0; i + j <= S; ++j) {
      if (mpq_sgn(y[j].get_mpq_t()) == 0) continue;
      mpq_mul(tmp, cx.get_mpq_t(), y[j].get_mpq_t());
      mpq_add(dst[i + j].get_mpq_t(), dst[i + j].get_mpq_t(), tmp);
    }
  }
}

}  // namespace detail

inline SSeries s_mul(const SSeries& x, const SSeries& y) {
  const int S = static_cast<int>(std::min(x.size(), y.size())) - 1;
  SSeries r(S + 1, Rat(0));
  mpq_t tmp;
  mpq_init(tmp);
  detail::s_mac(r.data(), x.data(), y.data(), S, tmp);
  mpq_clear(tmp);
  return r;
}

inline SSeries s_inverse(const SSeries& x) {
  const int S = static_cast<int>(x.size()) - 1;
  if (sgn(x[0]) == 0) throw ComputationError("s_inverse: constant term is zero");
  SSeries r(S + 1, Rat(0));
  const Rat inv0 = 1 / x[0];
  r[0] = inv0;
  for (int b = 1; b <= S; ++b) {
    Rat acc = 0;
    for (int k = 1; k <= b; ++k)
      if (sgn(x[k]) != 0) acc += x[k] * r[b - k];
    r[b] = -acc * inv0;
  }
  return r;
}

// x^e for rational e; requires x[0] = 1 unless e is an integer.
inline SSeries s_pow(const SSeries& x, const Rat& e) {
  const int S = static_cast<int>(x.size()) - 1;
  if (sgn(x[0]) == 0) throw ComputationError("s_pow: constant term is zero");
  Rat c0;
  if (is_integer(e)) {
    c0 = rat_pow(x[0], e.get_num().get_si());
  } else if (x[0] == 1) {
    c0 = 1;
  } else {
    throw ComputationError("s_pow: fractional power needs constant term 1");
  }
  // Miller recurrence: b x0 P_b = sum_{k=1}^b ((e+1)k - b) x_k P_{b-k}.
  SSeries p(S + 1, Rat(0));
  p[0] = c0;
  const Rat inv0 = 1 / x[0];
  for (int b = 1; b <= S; ++b) {
    Rat acc = 0;
    for (int k = 1; k <= b; ++k)
      if (sgn(x[k]) != 0) acc += ((e + 1) * k - b) * x[k] * p[b - k];
    p[b] = acc * inv0 / b;
  }
  return p;
}

class TSeries {
 public:
  TSeries() = default;
  // Zero series with rows lo..T and s-degrees 0..S.
  TSeries(int lo, int T, int S) : lo_(lo), T_(T), S_(S) {
    if (S < 0) throw ArgumentError("TSeries: negative s-order");
    c_.assign(static_cast<size_t>(std::max(0, T - lo + 1)) * (S + 1), Rat(0));
  }

  static TSeries constant(const Rat& v, int T, int S) {
    TSeries r(0, T, S);
    if (T >= 0) r.ref(0, 0) = v;
    return r;
  }
  static TSeries monomial(const Rat& v, int a, int b, int T, int S) {
    TSeries r(std::min(a, T + 1), T, S);
    if (a <= T && b <= S) r.ref(a, b) = v;
    return r;
  }
  // A pure s-series placed in row t^0.
  static TSeries from_s(const SSeries& f, int T, int S) {
    TSeries r(0, T, S);
    for (int b = 0; b <= S && b < static_cast<int>(f.size()); ++b) r.ref(0, b) = f[b];
    if (static_cast<int>(f.size()) <= S)
      throw ComputationError("TSeries::from_s: s-series shorter than the box");
    return r;
  }

  int lo() const { return lo_; }
  int T() const { return T_; }
  int S() const { return S_; }

  // Coefficient of t^a s^b; zero below lo, error outside the known box.
  Rat at(int a, int b) const {
    if (a > T_ || b > S_ || b < 0) {
      std::ostringstream os;
      os << "TSeries: coefficient t^" << a << " s^" << b << " outside the known box (T=" << T_
         << ", S=" << S_ << ")";
      throw ComputationError(os.str());
    }
    if (a < lo_) return Rat(0);
    return c_[idx(a, b)];
  }
  Rat& ref(int a, int b) { return c_[idx(a, b)]; }
  const Rat* row(int a) const { return &c_[idx(a, 0)]; }
  Rat* row(int a) { return &c_[idx(a, 0)]; }

  bool row_is_zero(int a) const {
    if (a < lo_ || a > T_) return true;
    const Rat* r = row(a);
    for (int b = 0; b <= S_; ++b)
      if (mpq_sgn(r[b].get_mpq_t()) != 0) return false;
    return true;
  }
  // First row containing a nonzero coefficient (T+1 if none).
  int valuation() const {
    for (int a = lo_; a <= T_; ++a)
      if (!row_is_zero(a)) return a;
    return T_ + 1;
  }

  SSeries row_series(int a) const {
    SSeries r(S_ + 1, Rat(0));
    if (a >= lo_ && a <= T_)
      for (int b = 0; b <= S_; ++b) r[b] = c_[idx(a, b)];
    return r;
  }

  TSeries truncated(int T, int S) const {
    T = std::min(T, T_);
    S = std::min(S, S_);
    TSeries r(std::min(lo_, T + 1), T, S);
    for (int a = r.lo_; a <= T; ++a)
      for (int b = 0; b <= S; ++b) r.ref(a, b) = at(a, b);
    return r;
  }

  TSeries operator+(const TSeries& o) const {
    const int T = std::min(T_, o.T_), S = std::min(S_, o.S_);
    TSeries r(std::min({lo_, o.lo_, T + 1}), T, S);
    for (int a = r.lo_; a <= T; ++a)
      for (int b = 0; b <= S; ++b) {
        Rat v = 0;
        if (a >= lo_) v += c_[idx(a, b)];
        if (a >= o.lo_) v += o.c_[o.idx(a, b)];
        r.ref(a, b) = v;
      }
    return r;
  }
  TSeries operator-() const {
    TSeries r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  TSeries operator-(const TSeries& o) const { return *this + (-o); }
  TSeries operator*(const Rat& k) const {
    TSeries r = *this;
    for (auto& v : r.c_) v *= k;
    return r;
  }
  TSeries operator*(const TSeries& o) const {
    const int va = valuation(), vb = o.valuation();
    const int T = std::min(T_ + vb, o.T_ + va);
    const int S = std::min(S_, o.S_);
    TSeries r(std::min(va + vb, T + 1), T, S);
    mpq_t tmp;
    mpq_init(tmp);
    for (int a1 = va; a1 <= T_; ++a1) {
      if (row_is_zero(a1)) continue;
      for (int a2 = vb; a2 <= o.T_ && a1 + a2 <= T; ++a2) {
        if (o.row_is_zero(a2)) continue;
        detail::s_mac(r.row(a1 + a2), row(a1), o.row(a2), S, tmp);
      }
    }
    mpq_clear(tmp);
    return r;
  }

  // Substitute t -> -t.
  TSeries neg_t() const {
    TSeries r = *this;
    for (int a = lo_; a <= T_; ++a)
      if ((a % 2 + 2) % 2 == 1)
        for (int b = 0; b <= S_; ++b) r.ref(a, b) = -r.ref(a, b);
    return r;
  }
  // Multiply by t^k.
  TSeries shift_t(int k) const {
    TSeries r = *this;
    r.lo_ += k;
    r.T_ += k;
    return r;
  }
  // Multiply by s^k (k >= 0); the box keeps its s-size.
  TSeries shift_s(int k) const {
    TSeries r(lo_, T_, S_);
    for (int a = lo_; a <= T_; ++a)
      for (int b = k; b <= S_; ++b) r.ref(a, b) = c_[idx(a, b - k)];
    return r;
  }

  // Multiplicative inverse; the lowest nonzero row must be an s-unit.
  TSeries inverse() const {
    const int v = valuation();
    if (v > T_) throw ComputationError("TSeries::inverse: zero series");
    const SSeries f0 = row_series(v);
    if (sgn(f0[0]) == 0) throw ComputationError("TSeries::inverse: leading row is not a unit in Q[[s]]");
    const SSeries g0 = s_inverse(f0);
    const int T = T_ - 2 * v;
    TSeries r(-v, T, S_);
    for (int b = 0; b <= S_; ++b) r.ref(-v, b) = g0[b];
    mpq_t tmp;
    mpq_init(tmp);
    SSeries acc(S_ + 1);
    for (int m = 1; -v + m <= T; ++m) {
      std::fill(acc.begin(), acc.end(), Rat(0));
      for (int k = 1; k <= m; ++k) {
        if (row_is_zero(v + k)) continue;
        detail::s_mac(acc.data(), row(v + k), r.row(-v + m - k), S_, tmp);
      }
      SSeries q = s_mul(acc, g0);
      for (int b = 0; b <= S_; ++b) r.ref(-v + m, b) = -q[b];
    }
    mpq_clear(tmp);
    return r;
  }

  // f^e for rational e; f must have valuation 0 and an s-unit leading row
  // (leading row 1 if e is not an integer).  Miller recurrence in t.
  TSeries pow(const Rat& e) const {
    if (sgn(e) == 0) return constant(Rat(1), T_, S_);
    const int v = valuation();
    if (v != 0) {
      if (is_integer(e) && v <= T_) {
        long k = e.get_num().get_si();
        return shift_t(-v).pow(e).shift_t(static_cast<int>(k * v));
      }
      throw ComputationError("TSeries::pow: series must start at t^0");
    }
    const SSeries f0 = row_series(0);
    const SSeries p0 = s_pow(f0, e);
    const SSeries g0 = s_inverse(f0);
    TSeries p(0, T_, S_);
    for (int b = 0; b <= S_; ++b) p.ref(0, b) = p0[b];
    mpq_t tmp;
    mpq_init(tmp);
    SSeries acc(S_ + 1);
    const Rat e1 = e + 1;
    for (int a = 1; a <= T_; ++a) {
      std::fill(acc.begin(), acc.end(), Rat(0));
      for (int k = 1; k <= a; ++k) {
        if (row_is_zero(k)) continue;
        Rat coef = e1 * k - a;
        detail::s_mac_scaled(acc.data(), coef, row(k), p.row(a - k), S_, tmp);
      }
      SSeries q = s_mul(acc, g0);
      for (int b = 0; b <= S_; ++b) p.ref(a, b) = q[b] / a;
    }
    mpq_clear(tmp);
    return p;
  }

  // exp(f) for f with no rows of t-degree <= 0.
  TSeries exp() const {
    for (int a = lo_; a <= std::min(0, T_); ++a)
      if (!row_is_zero(a)) throw ComputationError("TSeries::exp: argument has a t^0 (or lower) part");
    TSeries r(0, T_, S_);
    if (T_ < 0) return r;
    r.ref(0, 0) = 1;
    mpq_t tmp;
    mpq_init(tmp);
    for (int a = 1; a <= T_; ++a) {
      Rat* dst = r.row(a);
      for (int k = 1; k <= a; ++k) {
        if (row_is_zero(k)) continue;
        detail::s_mac_scaled(dst, Rat(k), row(k), r.row(a - k), S_, tmp);
      }
      for (int b = 0; b <= S_; ++b) dst[b] /= a;
    }
    mpq_clear(tmp);
    return r;
  }

  // Termwise antiderivative in t (constant of integration 0).
  TSeries integrate_t() const {
    if (lo_ < 0 && !row_is_zero(-1)) throw ComputationError("TSeries::integrate_t: t^-1 term");
    TSeries r(std::max(lo_, 0) + 1, T_ + 1, S_);
    for (int a = std::max(lo_, 0); a <= T_; ++a)
      for (int b = 0; b <= S_; ++b) r.ref(a + 1, b) = c_[idx(a, b)] / (a + 1);
    return r;
  }

  // Termwise derivative in t.
  TSeries diff_t() const {
    TSeries r(lo_ - 1, T_ - 1, S_);
    for (int a = lo_; a <= T_; ++a)
      for (int b = 0; b <= S_; ++b) r.ref(a - 1, b) = c_[idx(a, b)] * a;
    return r;
  }

  // True if both series agree on their common box.
  bool agrees_with(const TSeries& o) const {
    const int T = std::min(T_, o.T_), S = std::min(S_, o.S_);
    for (int a = std::min(lo_, o.lo_); a <= T; ++a)
      for (int b = 0; b <= S; ++b)
        if (at(a, b) != o.at(a, b)) return false;
    return true;
  }

  // The same object as a Lambda-series with q-Laurent coefficients over Q(i):
  // t^a s^b -> i^a Lambda^a q^{4b-a}.  Coefficient of Lambda^a is known through
  // q^{4S-a+3} (the next possibly nonzero exponent is 4(S+1)-a).
  LSeries to_lseries() const {
    const int lo = std::min(lo_, T_ + 1);
    std::vector<QLaurent> cs;
    for (int a = lo; a <= T_; ++a) {
      std::vector<GaussRat> q(4 * S_ + 1);
      for (int b = 0; b <= S_; ++b) {
        const Rat& v = c_[idx(a, b)];
        if (sgn(v) != 0) q[4 * b] = GaussRat::i_pow(a) * GaussRat(v);
      }
      cs.emplace_back(-a, std::move(q), 4L * S_ - a + 3);
    }
    return LSeries(lo, std::move(cs), T_);
  }

 private:
  size_t idx(int a, int b) const { return static_cast<size_t>(a - lo_) * (S_ + 1) + b; }

  int lo_ = 0, T_ = -1, S_ = 0;
  std::vector<Rat> c_;
};

// Coefficient of q^0 of  i^ipow q^qshift X  as a Laurent polynomial in Lambda,
// for Lambda-exponents <= D.  The monomial t^a s^b contributes i^{ipow+a}
// Lambda^a at q-exponent qshift + 4b - a.
inline LPoly coeff_q0(const TSeries& X, int ipow, int qshift, int D) {
  LPoly r;
  for (int a = X.lo(); a <= D; ++a) {
    const int num = a - qshift;
    if (((num % 4) + 4) % 4 != 0) continue;
    const int b = num / 4;
    if (b < 0) continue;
    const Rat v = X.at(a, b);  // throws if outside the known box
    if (sgn(v) == 0) continue;
    const int e = (((ipow + a) % 4) + 4) % 4;
    if (e % 2 != 0)
      throw ComputationError("coeff_q0: imaginary coefficient at Lambda^" + std::to_string(a));
    r.set(a, e == 0 ? v : Rat(-v));
  }
  return r;
}

// Coefficient of q^0 of  i^ipow q^qshift X Y  without forming the product.
inline LPoly coeff_q0_product(const TSeries& X, const TSeries& Y, int ipow, int qshift, int D) {
  const int vx = X.valuation(), vy = Y.valuation();
  const int T = std::min(X.T() + vy, Y.T() + vx);
  const int S = std::min(X.S(), Y.S());
  LPoly r;
  mpq_t tmp;
  mpq_init(tmp);
  for (int a = vx + vy; a <= D; ++a) {
    const int num = a - qshift;
    if (((num % 4) + 4) % 4 != 0) continue;
    const int b = num / 4;
    if (b < 0) continue;
    if (a > T || b > S) {
      std::ostringstream os;
      os << "coeff_q0_product: Lambda^" << a << " needs t^" << a << " s^" << b
         << " outside the known box (T=" << T << ", S=" << S << ")";
      throw ComputationError(os.str());
    }
    Rat acc = 0;
    for (int a1 = vx; a1 <= a - vy; ++a1) {
      const int a2 = a - a1;
      if (X.row_is_zero(a1) || Y.row_is_zero(a2)) continue;
      const Rat* x = X.row(a1);
      const Rat* y = Y.row(a2);
      for (int b1 = 0; b1 <= b; ++b1) {
        if (mpq_sgn(x[b1].get_mpq_t()) == 0 || mpq_sgn(y[b - b1].get_mpq_t()) == 0) continue;
        mpq_mul(tmp, x[b1].get_mpq_t(), y[b - b1].get_mpq_t());
        mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), tmp);
      }
    }
    if (sgn(acc) == 0) continue;
    const int e = (((ipow + a) % 4) + 4) % 4;
    if (e % 2 != 0) {
      mpq_clear(tmp);
      throw ComputationError("coeff_q0_product: imaginary coefficient at Lambda^" + std::to_string(a));
    }
    r.set(a, e == 0 ? acc : Rat(-acc));
  }
  mpq_clear(tmp);
  return r;
}

}  // namespace kdi
