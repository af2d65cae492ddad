// Laurent polynomials in Lambda over Q, closed forms N/(Lambda^a (1-Lambda^4)^b),
// and certified rational reconstruction of truncated Lambda-series.
#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kdi/scalars.hpp"

namespace kdi {

// Laurent polynomial sum_e c_e Lambda^e with rational coefficients (dense, with
// an exponent offset). Always normalized: no leading/trailing zero entries.
class LPoly {
 public:
  LPoly() = default;
  LPoly(const Rat& c) { set(0, c); }  // NOLINT(google-explicit-constructor)
  LPoly(long c) { set(0, Rat(c)); }   // NOLINT(google-explicit-constructor)

  static LPoly monomial(const Rat& c, int e) {
    LPoly p;
    p.set(e, c);
    return p;
  }
  // 1 - Lambda^4 raised to a nonnegative power.
  static LPoly one_minus_l4_pow(int k) {
    LPoly r(1);
    const LPoly f = LPoly(1) - monomial(Rat(1), 4);
    for (int i = 0; i < k; ++i) r *= f;
    return r;
  }

  bool is_zero() const { return c_.empty(); }
  int low() const { return c_.empty() ? 0 : lo_; }
  int high() const { return c_.empty() ? -1 : lo_ + static_cast<int>(c_.size()) - 1; }

  Rat coeff(int e) const {
    if (c_.empty() || e < lo_ || e > high()) return Rat(0);
    return c_[e - lo_];
  }

  void set(int e, const Rat& v) {
    if (sgn(v) == 0 && (c_.empty() || e < lo_ || e > high())) return;
    if (c_.empty()) {
      lo_ = e;
      c_.assign(1, v);
    } else if (e < lo_) {
      c_.insert(c_.begin(), lo_ - e, Rat(0));
      lo_ = e;
      c_[0] = v;
    } else if (e > high()) {
      c_.resize(e - lo_ + 1, Rat(0));
      c_[e - lo_] = v;
    } else {
      c_[e - lo_] = v;
    }
    normalize();
  }
  void add_to(int e, const Rat& v) { set(e, coeff(e) + v); }

  // Nonzero terms as (exponent, coefficient), ascending.
  std::vector<std::pair<int, Rat>> terms() const {
    std::vector<std::pair<int, Rat>> t;
    for (size_t i = 0; i < c_.size(); ++i)
      if (sgn(c_[i]) != 0) t.emplace_back(lo_ + static_cast<int>(i), c_[i]);
    return t;
  }

  LPoly& operator+=(const LPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    int nlo = std::min(lo_, o.lo_), nhi = std::max(high(), o.high());
    std::vector<Rat> r(nhi - nlo + 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[lo_ - nlo + i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[o.lo_ - nlo + i] += o.c_[i];
    lo_ = nlo;
    c_ = std::move(r);
    normalize();
    return *this;
  }
  LPoly& operator-=(const LPoly& o) { return *this += -o; }
  LPoly operator-() const {
    LPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  LPoly& operator*=(const LPoly& o) { return *this = *this * o; }
  LPoly& operator*=(const Rat& s) {
    if (sgn(s) == 0) return *this = LPoly();
    for (auto& x : c_) x *= s;
    return *this;
  }

  friend LPoly operator+(LPoly a, const LPoly& b) { return a += b; }
  friend LPoly operator-(LPoly a, const LPoly& b) { return a -= b; }
  friend LPoly operator*(LPoly a, const Rat& s) { return a *= s; }
  friend LPoly operator*(const Rat& s, LPoly a) { return a *= s; }
  friend LPoly operator*(const LPoly& a, const LPoly& b) {
    LPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.lo_ = a.lo_ + b.lo_;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (sgn(a.c_[i]) == 0) continue;
      for (size_t j = 0; j < b.c_.size(); ++j)
        if (sgn(b.c_[j]) != 0) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.normalize();
    return r;
  }
  friend bool operator==(const LPoly& a, const LPoly& b) {
    return a.c_ == b.c_ && (a.c_.empty() || a.lo_ == b.lo_);
  }
  friend bool operator!=(const LPoly& a, const LPoly& b) { return !(a == b); }

  // Multiply by Lambda^k.
  LPoly shifted(int k) const {
    LPoly r = *this;
    if (!r.c_.empty()) r.lo_ += k;
    return r;
  }
  // Keep exponents <= K.
  LPoly truncated(int K) const {
    LPoly r;
    for (auto& [e, v] : terms())
      if (e <= K) r.set(e, v);
    return r;
  }
  // Keep exponents in [lo, hi].
  LPoly window(int lo, int hi) const {
    LPoly r;
    for (auto& [e, v] : terms())
      if (e >= lo && e <= hi) r.set(e, v);
    return r;
  }
  LPoly pow(int k) const {
    if (k < 0) throw ArgumentError("LPoly::pow: negative exponent");
    LPoly r(1), b = *this;
    while (k > 0) {
      if (k & 1) r *= b;
      k >>= 1;
      if (k) b *= b;
    }
    return r;
  }

  Rat eval(const Rat& x) const {
    Rat r = 0;
    for (auto& [e, v] : terms()) r += v * rat_pow(x, e);
    return r;
  }

  // Exact division by (1 - Lambda^4); returns false if not divisible.
  bool divide_one_minus_l4(LPoly* quotient) const {
    if (is_zero()) {
      *quotient = LPoly();
      return true;
    }
    const int lo = lo_, hi = high();
    // N = (1-L^4) Q  <=>  q_e = n_e + q_{e-4}, with q supported on [lo, hi-4].
    std::map<int, Rat> q;
    for (int e = lo; e <= hi; ++e) {
      Rat v = coeff(e);
      auto it = q.find(e - 4);
      if (it != q.end()) v += it->second;
      if (e > hi - 4) {
        if (sgn(v) != 0) return false;
      } else {
        q[e] = v;
      }
    }
    LPoly r;
    for (auto& [e, v] : q) r.set(e, v);
    *quotient = r;
    return true;
  }

  // Substitute Lambda -> 1/Lambda.
  LPoly inverted() const {
    LPoly r;
    for (auto& [e, v] : terms()) r.set(-e, v);
    return r;
  }

  std::string str(const std::string& var = "L") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, v] : terms()) {
      Rat a = abs(v);
      os << (sgn(v) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      bool unit = (a == 1);
      if (!unit || e == 0) os << rat_to_string(a);
      if (e != 0) {
        if (!unit) os << "*";
        os << var;
        if (e != 1) os << "^" << e;
      }
      first = false;
    }
    return os.str();
  }

 private:
  void normalize() {
    size_t a = 0;
    while (a < c_.size() && sgn(c_[a]) == 0) ++a;
    if (a == c_.size()) {
      c_.clear();
      lo_ = 0;
      return;
    }
    size_t b = c_.size();
    while (b > a && sgn(c_[b - 1]) == 0) --b;
    if (a > 0 || b < c_.size()) {
      c_ = std::vector<Rat>(c_.begin() + a, c_.begin() + b);
      lo_ += static_cast<int>(a);
    }
  }

  int lo_ = 0;
  std::vector<Rat> c_;
};

// A Lambda-series over Q known modulo Lambda^{trunc+1}.
struct RatSeries {
  LPoly p;
  int trunc = 0;

  Rat coeff(int e) const {
    if (e > trunc) throw ComputationError("RatSeries: coefficient beyond truncation");
    return p.coeff(e);
  }
  RatSeries& operator+=(const RatSeries& o) {
    trunc = std::min(trunc, o.trunc);
    p = (p + o.p).truncated(trunc);
    return *this;
  }
  friend RatSeries operator+(RatSeries a, const RatSeries& b) { return a += b; }
  // Multiply by a Laurent polynomial (exact); truncation shifts by its low degree.
  RatSeries times(const LPoly& f) const {
    if (f.is_zero()) return RatSeries{LPoly(), trunc + 1000000};
    RatSeries r;
    r.trunc = trunc + f.low();
    r.p = (p * f).truncated(r.trunc);
    return r;
  }
};

// Exact rational function numer / (1 - Lambda^4)^b, numer a Laurent polynomial.
// The canonical form has numer not divisible by (1 - Lambda^4) (or b = 0).
class LambdaRational {
 public:
  LambdaRational() = default;
  LambdaRational(LPoly numer, int b) : num_(std::move(numer)), b_(b) { canonicalize(); }
  LambdaRational(const LPoly& p) : num_(p), b_(0) {}  // NOLINT(google-explicit-constructor)

  // numer / (Lambda^a (1 - Lambda^4)^b)
  static LambdaRational make(const LPoly& numer, int a, int b) {
    return LambdaRational(numer.shifted(-a), b);
  }

  const LPoly& full_numerator() const { return num_; }
  int one_minus_l4_pow() const { return b_; }
  // Split numer = Lambda^{-lambda_pow} * stripped with stripped(0) != 0.
  int lambda_pow() const { return num_.is_zero() ? 0 : -num_.low(); }
  LPoly stripped_numerator() const { return num_.shifted(lambda_pow()); }

  bool is_laurent_polynomial() const { return b_ == 0; }

  LambdaRational operator+(const LambdaRational& o) const {
    int b = std::max(b_, o.b_);
    return LambdaRational(num_ * LPoly::one_minus_l4_pow(b - b_) +
                              o.num_ * LPoly::one_minus_l4_pow(b - o.b_),
                          b);
  }
  LambdaRational operator-() const { return LambdaRational(-num_, b_); }
  LambdaRational operator-(const LambdaRational& o) const { return *this + (-o); }
  LambdaRational operator*(const LambdaRational& o) const {
    return LambdaRational(num_ * o.num_, b_ + o.b_);
  }
  LambdaRational operator*(const Rat& s) const { return LambdaRational(num_ * s, b_); }
  LambdaRational& operator+=(const LambdaRational& o) { return *this = *this + o; }
  LambdaRational& operator-=(const LambdaRational& o) { return *this = *this - o; }

  // Divide by Lambda^a (1 - Lambda^4)^b.
  LambdaRational divided(int a, int b) const {
    return LambdaRational(num_.shifted(-a), b_ + b);
  }

  friend bool operator==(const LambdaRational& x, const LambdaRational& y) {
    return x.b_ == y.b_ && x.num_ == y.num_;
  }
  friend bool operator!=(const LambdaRational& x, const LambdaRational& y) { return !(x == y); }

  // Expansion as a Lambda-series, exact through Lambda^K.
  RatSeries series(int K) const {
    LPoly r;
    for (auto& [e, v] : num_.terms()) {
      Int binom = 1;  // C(b-1+k, k)
      for (int k = 0; e + 4 * k <= K; ++k) {
        if (k > 0) {
          binom *= (b_ - 1 + k);
          mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(k));
        }
        if (b_ == 0 && k > 0) break;
        r.add_to(e + 4 * k, v * Rat(binom));
      }
    }
    return RatSeries{r, K};
  }

  // Numerator evaluated at Lambda = 1 (after stripping the Lambda power).
  Rat numerator_at_one() const { return num_.eval(Rat(1)); }

  std::string str() const {
    std::string n = "(" + num_.str() + ")";
    if (b_ == 0) return n;
    return n + "/(1-L^4)^" + std::to_string(b_);
  }

 private:
  void canonicalize() {
    if (b_ < 0) {
      num_ *= LPoly::one_minus_l4_pow(-b_);
      b_ = 0;
    }
    LPoly q;
    while (b_ > 0 && num_.divide_one_minus_l4(&q)) {
      num_ = q;
      --b_;
    }
    if (num_.is_zero()) b_ = 0;
  }

  LPoly num_;
  int b_ = 0;
};

// x - y is a Laurent polynomial ("agree up to finitely many initial terms" in the
// strong form: the rational parts coincide).
inline bool equal_up_to_laurent_poly(const LambdaRational& x, const LambdaRational& y) {
  return (x - y).is_laurent_polynomial();
}

// Certified reconstruction of s as N / (Lambda^a (1-Lambda^4)^b): the product
// Lambda^a (1-Lambda^4)^b s must vanish on its last `guard` known exponents.
inline LambdaRational rational_reconstruct(const RatSeries& s, int a, int b, int guard = 8) {
  if (b < 0) throw ArgumentError("rational_reconstruct: negative (1-L^4) power");
  const int K = s.trunc + a;  // known range of the product
  if (K - guard < s.p.low() + a) {
    std::ostringstream os;
    os << "not certified rational at this order: only known through L^" << s.trunc
       << ", which leaves no room for " << guard << " guard terms";
    throw ComputationError(os.str());
  }
  LPoly w = (s.p.shifted(a) * LPoly::one_minus_l4_pow(b)).truncated(K);
  for (int e = K - guard + 1; e <= K; ++e) {
    if (sgn(w.coeff(e)) != 0) {
      std::ostringstream os;
      os << "not certified rational at this order: coefficient of L^" << e
         << " in L^" << a << "(1-L^4)^" << b << "*s is " << w.coeff(e).get_str();
      throw ComputationError(os.str());
    }
  }
  return LambdaRational::make(w.truncated(K - guard), a, b);
}

}  // namespace kdi
