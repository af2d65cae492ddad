// Truncated Laurent series in q over Q(i) (QLaurent) and Lambda-series whose
// coefficients are QLaurent (LSeries). Every object carries its truncation.
#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kdi/lpoly.hpp"
#include "kdi/scalars.hpp"

namespace kdi {

// Truncation value used for objects that are exact (polynomials).
inline constexpr long kExact = 1L << 40;

inline long add_trunc(long a, long b) {
  if (a >= kExact || b >= kExact) return kExact;
  return a + b;
}

// sum_{e=lo}^{hi} c_e q^e + O(q^{trunc+1}).
class QLaurent {
 public:
  QLaurent() = default;  // exact zero
  QLaurent(long lo, std::vector<GaussRat> c, long trunc) : lo_(lo), c_(std::move(c)), trunc_(trunc) {
    normalize();
  }
  static QLaurent zero(long trunc) { return QLaurent(0, {}, trunc); }
  static QLaurent monomial(const GaussRat& c, long e, long trunc = kExact) {
    return QLaurent(e, {c}, trunc);
  }

  long trunc() const { return trunc_; }
  bool is_zero() const { return c_.empty(); }
  // Lowest exponent with a nonzero coefficient; trunc+1 for the zero series.
  long valuation() const { return c_.empty() ? add_trunc(trunc_, 1) : lo_; }
  long high() const { return c_.empty() ? valuation() - 1 : lo_ + static_cast<long>(c_.size()) - 1; }

  GaussRat coeff(long e) const {
    if (e > trunc_) {
      std::ostringstream os;
      os << "QLaurent: coefficient of q^" << e << " requested beyond truncation q^" << trunc_;
      throw ComputationError(os.str());
    }
    if (c_.empty() || e < lo_ || e > high()) return GaussRat();
    return c_[e - lo_];
  }

  QLaurent with_trunc(long t) const { return QLaurent(lo_, c_, std::min(t, trunc_)); }
  // Multiply by q^k.
  QLaurent shifted(long k) const { return QLaurent(lo_ + k, c_, add_trunc(trunc_, k)); }

  QLaurent operator+(const QLaurent& o) const {
    long t = std::min(trunc_, o.trunc_);
    if (c_.empty()) return o.with_trunc(t);
    if (o.c_.empty()) return with_trunc(t);
    long lo = std::min(lo_, o.lo_), hi = std::max(high(), o.high());
    hi = std::min(hi, t);
    if (hi < lo) return zero(t);
    std::vector<GaussRat> r(hi - lo + 1);
    for (long e = lo; e <= hi; ++e) {
      if (e >= lo_ && e <= high()) r[e - lo] += c_[e - lo_];
      if (e >= o.lo_ && e <= o.high()) r[e - lo] += o.c_[e - o.lo_];
    }
    return QLaurent(lo, std::move(r), t);
  }
  QLaurent operator-() const {
    QLaurent r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  QLaurent operator-(const QLaurent& o) const { return *this + (-o); }
  QLaurent operator*(const GaussRat& s) const {
    if (s.is_zero()) return zero(trunc_);
    QLaurent r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
  }
  QLaurent operator*(const QLaurent& o) const {
    long t = std::min(add_trunc(trunc_, o.valuation()), add_trunc(o.trunc_, valuation()));
    if (c_.empty() || o.c_.empty()) return zero(t);
    long lo = lo_ + o.lo_;
    long hi = std::min(high() + o.high(), t);
    if (hi < lo) return zero(t);
    std::vector<GaussRat> r(hi - lo + 1);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) {
        long e = lo + static_cast<long>(i + j);
        if (e > hi) break;
        if (!o.c_[j].is_zero()) r[e - lo] += c_[i] * o.c_[j];
      }
    }
    return QLaurent(lo, std::move(r), t);
  }

  // Multiplicative inverse of a nonzero series q^v (c0 + c1 q + ...).
  QLaurent invert() const {
    if (c_.empty()) throw ComputationError("QLaurent::invert: series is zero to its truncation");
    const long v = lo_;
    const long t = add_trunc(trunc_, -2 * v);  // known through q^{t}
    const long n = (t >= kExact) ? static_cast<long>(c_.size()) + 64 : t + v + 1;
    if (t >= kExact && c_.size() > 1)
      throw ComputationError("QLaurent::invert: exact non-monomial input needs a truncation");
    std::vector<GaussRat> r(std::max(1L, n));
    const GaussRat inv0 = GaussRat(1) / c_[0];
    r[0] = inv0;
    for (long m = 1; m < n; ++m) {
      GaussRat acc;
      for (long k = 1; k <= m && k < static_cast<long>(c_.size()); ++k)
        if (!c_[k].is_zero() && !r[m - k].is_zero()) acc += c_[k] * r[m - k];
      r[m] = -(acc * inv0);
    }
    if (t >= kExact) r.resize(1);
    return QLaurent(-v, std::move(r), t);
  }

  friend bool operator==(const QLaurent& a, const QLaurent& b) {
    return a.trunc_ == b.trunc_ && a.c_ == b.c_ && (a.c_.empty() || a.lo_ == b.lo_);
  }

  // True if the two series agree on their common known range.
  bool agrees_with(const QLaurent& o) const {
    long t = std::min(trunc_, o.trunc_);
    long lo = std::min(valuation(), o.valuation());
    for (long e = lo; e <= t && e <= std::max(high(), o.high()); ++e)
      if (coeff(e) != o.coeff(e)) return false;
    return true;
  }

  std::vector<std::pair<long, GaussRat>> terms() const {
    std::vector<std::pair<long, GaussRat>> out;
    for (size_t i = 0; i < c_.size(); ++i)
      if (!c_[i].is_zero()) out.emplace_back(lo_ + static_cast<long>(i), c_[i]);
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    for (auto& [e, v] : terms()) os << v.str() << "*q^" << e << " + ";
    os << "O(q^" << add_trunc(trunc_, 1) << ")";
    return os.str();
  }

 private:
  void normalize() {
    // Drop coefficients beyond the truncation and zero padding at both ends.
    if (!c_.empty() && lo_ + static_cast<long>(c_.size()) - 1 > trunc_) {
      long keep = trunc_ - lo_ + 1;
      c_.resize(keep > 0 ? keep : 0);
    }
    size_t a = 0;
    while (a < c_.size() && c_[a].is_zero()) ++a;
    size_t b = c_.size();
    while (b > a && c_[b - 1].is_zero()) --b;
    if (a == b) {
      c_.clear();
      lo_ = 0;
      return;
    }
    if (a > 0 || b < c_.size()) {
      c_ = std::vector<GaussRat>(c_.begin() + a, c_.begin() + b);
      lo_ += static_cast<long>(a);
    }
  }

  long lo_ = 0;
  std::vector<GaussRat> c_;
  long trunc_ = kExact;
};

// Laurent polynomial in Lambda over Q(i).
using GLPoly = std::map<int, GaussRat>;

inline LPoly real_part_checked(const GLPoly& g, const std::string& context = "") {
  LPoly r;
  for (auto& [e, v] : g) r.set(e, as_real(v, context + " at L^" + std::to_string(e)));
  return r;
}

// sum_{j=lo}^{ltrunc} f_j(q) Lambda^j + O(Lambda^{ltrunc+1}).
class LSeries {
 public:
  LSeries() = default;
  LSeries(int lo, std::vector<QLaurent> c, int ltrunc) : lo_(lo), c_(std::move(c)), ltrunc_(ltrunc) {
    c_.resize(std::max(0, ltrunc_ - lo_ + 1), QLaurent());
  }

  static LSeries constant(const QLaurent& f, int ltrunc) {
    return monomial_series(f, 0, ltrunc);
  }
  static LSeries monomial_series(const QLaurent& f, int lexp, int ltrunc) {
    if (lexp > ltrunc) return LSeries(lexp, {}, ltrunc);
    std::vector<QLaurent> c(ltrunc - lexp + 1, QLaurent());
    c[0] = f;
    return LSeries(lexp, std::move(c), ltrunc);
  }
  // c * Lambda^lexp * q^qexp
  static LSeries monomial(const GaussRat& c, int lexp, long qexp, int ltrunc, long qtrunc = kExact) {
    return monomial_series(QLaurent::monomial(c, qexp, qtrunc), lexp, ltrunc);
  }

  int lo() const { return lo_; }
  int ltrunc() const { return ltrunc_; }

  // Coefficient of Lambda^j (j <= ltrunc).
  QLaurent coeff(int j) const {
    if (j > ltrunc_) throw ComputationError("LSeries: coefficient beyond Lambda truncation");
    if (j < lo_) return QLaurent();
    return c_[j - lo_];
  }
  void set_coeff(int j, const QLaurent& f) {
    if (j > ltrunc_) return;
    if (j < lo_) {
      c_.insert(c_.begin(), lo_ - j, QLaurent());
      lo_ = j;
    }
    c_[j - lo_] = f;
  }

  // Lowest Lambda-exponent with a nonzero coefficient (ltrunc+1 if none).
  int valuation() const {
    for (int j = lo_; j <= ltrunc_; ++j)
      if (!c_[j - lo_].is_zero()) return j;
    return ltrunc_ + 1;
  }

  LSeries with_ltrunc(int t) const {
    t = std::min(t, ltrunc_);
    std::vector<QLaurent> c;
    for (int j = lo_; j <= t; ++j) c.push_back(c_[j - lo_]);
    return LSeries(lo_, std::move(c), t);
  }

  LSeries operator+(const LSeries& o) const {
    int t = std::min(ltrunc_, o.ltrunc_);
    int lo = std::min(lo_, o.lo_);
    std::vector<QLaurent> c;
    for (int j = lo; j <= t; ++j) {
      bool a = j >= lo_, b = j >= o.lo_;
      if (a && b) c.push_back(coeff(j) + o.coeff(j));
      else if (a) c.push_back(coeff(j));
      else if (b) c.push_back(o.coeff(j));
      else c.push_back(QLaurent());
    }
    return LSeries(lo, std::move(c), t);
  }
  LSeries operator-() const {
    LSeries r = *this;
    for (auto& f : r.c_) f = -f;
    return r;
  }
  LSeries operator-(const LSeries& o) const { return *this + (-o); }
  LSeries operator*(const GaussRat& s) const {
    LSeries r = *this;
    for (auto& f : r.c_) f = f * s;
    return r;
  }
  LSeries operator*(const QLaurent& f) const {
    LSeries r = *this;
    for (auto& g : r.c_) g = g * f;
    return r;
  }
  LSeries operator*(const LSeries& o) const {
    const int va = valuation(), vb = o.valuation();
    const int t = std::min(ltrunc_ + vb, o.ltrunc_ + va);
    const int lo = va + vb;
    std::vector<QLaurent> c;
    for (int k = lo; k <= t; ++k) {
      QLaurent acc;
      bool first = true;
      for (int i = va; i <= ltrunc_ && k - i >= vb; ++i) {
        int j = k - i;
        if (j > o.ltrunc_) continue;
        QLaurent p = coeff(i) * o.coeff(j);
        acc = first ? p : acc + p;
        first = false;
      }
      c.push_back(acc);
    }
    return LSeries(lo, std::move(c), t);
  }
  // Multiply by Lambda^k.
  LSeries shifted(int k) const { return LSeries(lo_ + k, c_, ltrunc_ + k); }

  LSeries invert() const {
    const int v = valuation();
    if (v > ltrunc_)
      throw ComputationError("LSeries::invert: series is zero to its truncation");
    const QLaurent& a0 = c_[v - lo_];
    const QLaurent b0 = a0.invert();
    const int t = ltrunc_ - 2 * v;
    std::vector<QLaurent> b;
    b.push_back(b0);
    for (int m = 1; -v + m <= t; ++m) {
      QLaurent acc;
      bool first = true;
      for (int k = 1; k <= m; ++k) {
        QLaurent p = coeff(v + k) * b[m - k];
        acc = first ? p : acc + p;
        first = false;
      }
      b.push_back(-(acc * b0));
    }
    return LSeries(-v, std::move(b), t);
  }

  LSeries pow(long e) const {
    if (e < 0) return invert().pow(-e);
    if (e == 0) return constant(QLaurent::monomial(GaussRat(1), 0), ltrunc_);
    LSeries r;
    LSeries base = *this;
    bool have = false;
    while (e > 0) {
      if (e & 1) {
        r = have ? r * base : base;
        have = true;
      }
      e >>= 1;
      if (e) base = base * base;
    }
    return r;
  }

  // Keep the nonpositive q-powers of each coefficient.
  LSeries principal_part() const {
    std::vector<QLaurent> c;
    for (int j = lo_; j <= ltrunc_; ++j) {
      const QLaurent& f = c_[j - lo_];
      if (f.trunc() < 0)
        throw ComputationError("principal_part: q-truncation below q^0 at L^" + std::to_string(j));
      std::vector<GaussRat> kept;
      long lo = f.valuation();
      for (long e = lo; e <= 0 && !f.is_zero(); ++e) kept.push_back(f.coeff(e));
      c.push_back(kept.empty() ? QLaurent() : QLaurent(lo, kept, kExact));
    }
    return LSeries(lo_, std::move(c), ltrunc_);
  }

  // Coefficient of q^0 in each Lambda-coefficient.
  GLPoly coeff_q0() const {
    GLPoly r;
    for (int j = lo_; j <= ltrunc_; ++j) {
      GaussRat v = c_[j - lo_].coeff(0);
      if (!v.is_zero()) r[j] = v;
    }
    return r;
  }

  // True if the two series agree on their common known range.
  bool agrees_with(const LSeries& o) const {
    int t = std::min(ltrunc_, o.ltrunc_);
    for (int j = std::min(lo_, o.lo_); j <= t; ++j)
      if (!coeff(j).agrees_with(o.coeff(j))) return false;
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    for (int j = lo_; j <= ltrunc_; ++j)
      if (!c_[j - lo_].is_zero()) os << "L^" << j << ": " << c_[j - lo_].str() << "\n";
    os << "O(L^" << ltrunc_ + 1 << ")";
    return os.str();
  }

 private:
  int lo_ = 0;
  std::vector<QLaurent> c_;
  int ltrunc_ = -1;
};

// exp(a) for a of positive Lambda-order.
inline LSeries exp_series(const LSeries& a) {
  const int v = a.valuation();
  const int t = a.ltrunc();
  if (v <= 0 && v <= t) throw ArgumentError("exp_series: argument must have positive Lambda-order");
  LSeries r = LSeries::monomial(GaussRat(1), 0, 0, t);
  LSeries term = r;
  for (int k = 1; v * k <= t; ++k) {
    term = (term * a) * GaussRat(Rat(1, k));
    r = r + term;
  }
  return r;
}

// (1 + v)^{1/2} for v of positive Lambda-order, by the binomial series.
inline LSeries binom_sqrt(const LSeries& v) {
  const int val = v.valuation();
  const int t = v.ltrunc();
  if (val <= 0 && val <= t) throw ArgumentError("binom_sqrt: argument must have positive Lambda-order");
  LSeries r = LSeries::monomial(GaussRat(1), 0, 0, t);
  LSeries p = r;
  Rat c = 1;
  for (int k = 1; val * k <= t; ++k) {
    c *= (Rat(1, 2) - (k - 1));
    c /= k;
    p = p * v;
    r = r + p * GaussRat(c);
  }
  return r;
}

inline LSeries invert(const LSeries& a) { return a.invert(); }
inline LSeries principal_part(const LSeries& a) { return a.principal_part(); }
inline GLPoly coeff_q0(const LSeries& a) { return a.coeff_q0(); }

}  // namespace kdi
