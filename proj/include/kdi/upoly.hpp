// Dense univariate polynomials over Q and reduced rational functions in one
// variable.  The variable is t, which stands for lambda^4 in the blowup
// polynomials.
#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kdi/scalars.hpp"

namespace kdi {

class UPoly {
 public:
  UPoly() = default;
  UPoly(const Rat& c) {  // NOLINT(google-explicit-constructor)
    if (sgn(c) != 0) c_.push_back(c);
  }
  UPoly(long c) : UPoly(Rat(c)) {}  // NOLINT(google-explicit-constructor)
  explicit UPoly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }

  static UPoly monomial(const Rat& c, int e) {
    std::vector<Rat> v(e + 1, Rat(0));
    v[e] = c;
    return UPoly(std::move(v));
  }
  // (1 - t)^k
  static UPoly one_minus_t_pow(int k) {
    UPoly r(1);
    const UPoly f = UPoly(1) - monomial(Rat(1), 1);
    for (int i = 0; i < k; ++i) r = r * f;
    return r;
  }

  bool is_zero() const { return c_.empty(); }
  int deg() const { return static_cast<int>(c_.size()) - 1; }
  const Rat& lead() const { return c_.back(); }
  Rat coeff(int i) const { return (i >= 0 && i <= deg()) ? c_[i] : Rat(0); }
  const std::vector<Rat>& coeffs() const { return c_; }

  UPoly operator+(const UPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return UPoly(std::move(r));
  }
  UPoly operator-() const {
    UPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  UPoly operator-(const UPoly& o) const { return *this + (-o); }
  UPoly operator*(const Rat& s) const {
    if (sgn(s) == 0) return UPoly();
    UPoly r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
  }
  UPoly operator*(const UPoly& o) const {
    if (is_zero() || o.is_zero()) return UPoly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
    mpq_t tmp;
    mpq_init(tmp);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (sgn(c_[i]) == 0) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) {
        if (sgn(o.c_[j]) == 0) continue;
        mpq_mul(tmp, c_[i].get_mpq_t(), o.c_[j].get_mpq_t());
        mpq_add(r[i + j].get_mpq_t(), r[i + j].get_mpq_t(), tmp);
      }
    }
    mpq_clear(tmp);
    return UPoly(std::move(r));
  }
  UPoly& operator+=(const UPoly& o) { return *this = *this + o; }
  UPoly& operator-=(const UPoly& o) { return *this = *this - o; }
  UPoly& operator*=(const UPoly& o) { return *this = *this * o; }

  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

  // Euclidean division: *this = q * d + r with deg r < deg d.
  void divmod(const UPoly& d, UPoly* q, UPoly* r) const {
    if (d.is_zero()) throw ComputationError("UPoly: division by zero");
    std::vector<Rat> rem = c_;
    const int dd = d.deg();
    std::vector<Rat> quo(std::max(0, deg() - dd + 1), Rat(0));
    const Rat inv = 1 / d.lead();
    for (int k = deg(); k >= dd; --k) {
      if (sgn(rem[k]) == 0) continue;
      Rat f = rem[k] * inv;
      quo[k - dd] = f;
      for (int j = 0; j <= dd; ++j) rem[k - dd + j] -= f * d.c_[j];
    }
    if (q) *q = UPoly(std::move(quo));
    if (r) {
      rem.resize(std::max(0, std::min(static_cast<int>(rem.size()), dd)));
      *r = UPoly(std::move(rem));
    }
  }
  // Exact division; throws if the remainder is nonzero.
  UPoly exact_div(const UPoly& d) const {
    UPoly q, r;
    divmod(d, &q, &r);
    if (!r.is_zero()) throw ComputationError("UPoly: inexact division");
    return q;
  }
  UPoly monic() const {
    if (is_zero()) return *this;
    return *this * (1 / lead());
  }
  Rat eval(const Rat& x) const {
    Rat r = 0;
    for (int i = deg(); i >= 0; --i) r = r * x + c_[i];
    return r;
  }
  // Multiplicity of the root t = 1.
  int valuation_at_one() const {
    if (is_zero()) throw ComputationError("UPoly: valuation of zero");
    int v = 0;
    UPoly p = *this;
    const UPoly f = UPoly(1) - monomial(Rat(1), 1);
    while (sgn(p.eval(Rat(1))) == 0) {
      p = p.exact_div(f);
      ++v;
    }
    return v;
  }

  std::string str(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= deg(); ++i) {
      if (sgn(c_[i]) == 0) continue;
      Rat a = abs(c_[i]);
      os << (sgn(c_[i]) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      if (a != 1 || i == 0) os << rat_to_string(a) << (i ? "*" : "");
      if (i) os << var << (i > 1 ? "^" + std::to_string(i) : "");
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  std::vector<Rat> c_;
};

namespace detail {

// Primitive integer polynomial proportional to p (p nonzero).
inline std::vector<Int> primitive_int(const UPoly& p) {
  Int l = 1;
  for (auto& c : p.coeffs()) l = lcm(l, Int(c.get_den()));
  std::vector<Int> v;
  Int g = 0;
  for (auto& c : p.coeffs()) {
    Int x = c.get_num() * (l / c.get_den());
    g = gcd(g, x);
    v.push_back(x);
  }
  for (auto& x : v) x /= g;
  return v;
}

inline UPoly euclid_gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r;
    a.divmod(b, nullptr, &r);
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

inline bool divides(const UPoly& d, const UPoly& p) {
  UPoly r;
  p.divmod(d, nullptr, &r);
  return r.is_zero();
}

}  // namespace detail

// Monic greatest common divisor.  Heuristic integer-evaluation gcd (evaluate at
// a large integer, take the integer gcd, read the polynomial back from its
// balanced digits); a candidate is accepted only after exact division checks,
// otherwise the plain Euclidean algorithm is used.
inline UPoly gcd(const UPoly& a, const UPoly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.deg() == 0 || b.deg() == 0) return UPoly(1);
  const std::vector<Int> A = detail::primitive_int(a), B = detail::primitive_int(b);
  Int ma = 0, mb = 0;
  for (auto& x : A) ma = std::max(ma, Int(abs(x)));
  for (auto& x : B) mb = std::max(mb, Int(abs(x)));
  Int xi = 2 * std::min(ma, mb) + 29;
  auto eval = [](const std::vector<Int>& p, const Int& x) {
    Int r = 0;
    for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
  };
  for (int attempt = 0; attempt < 6; ++attempt) {
    Int g = gcd(eval(A, xi), eval(B, xi));
    std::vector<Rat> c;
    Int half = xi / 2;
    while (g != 0) {
      Int d = g % xi;  // truncated toward zero
      if (d < 0) d += xi;
      if (d > half) d -= xi;
      c.push_back(Rat(d));
      g = (g - d) / xi;
    }
    UPoly cand(std::move(c));
    if (!cand.is_zero()) {
      cand = cand.monic();
      if (detail::divides(cand, a) && detail::divides(cand, b)) return cand;
    }
    xi = xi * 73794 / 27011;
  }
  return detail::euclid_gcd(a, b);
}

// num / den in lowest terms with monic den.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(const UPoly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(UPoly n, UPoly d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

  const UPoly& num() const { return num_; }
  const UPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RatFunc operator+(const RatFunc& o) const {
    if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RatFunc operator-() const { return RatFunc(-num_, den_, true); }
  RatFunc operator-(const RatFunc& o) const { return *this + (-o); }
  RatFunc operator*(const RatFunc& o) const {
    if (is_zero() || o.is_zero()) return RatFunc();
    // cross-cancel before multiplying
    UPoly g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
    return RatFunc(num_.exact_div(g1) * o.num_.exact_div(g2), den_.exact_div(g2) * o.den_.exact_div(g1),
                   true);
  }
  RatFunc inverse() const {
    if (is_zero()) throw ComputationError("RatFunc: inverse of zero");
    return RatFunc(den_, num_);
  }
  RatFunc operator/(const RatFunc& o) const { return *this * o.inverse(); }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  // Already reduced up to normalization of the denominator.
  RatFunc(UPoly n, UPoly d, bool) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  void reduce() {
    if (den_.is_zero()) throw ComputationError("RatFunc: zero denominator");
    if (num_.is_zero()) {
      den_ = UPoly(1);
      return;
    }
    UPoly g = gcd(num_, den_);
    if (g.deg() > 0) {
      num_ = num_.exact_div(g);
      den_ = den_.exact_div(g);
    }
    normalize();
  }
  void normalize() {
    if (num_.is_zero()) {
      den_ = UPoly(1);
      return;
    }
    Rat l = den_.lead();
    if (l != 1) {
      num_ = num_ * (1 / l);
      den_ = den_ * (1 / l);
    }
  }

  UPoly num_, den_;
};

}  // namespace kdi
