// Exact rational and Gaussian-rational scalars.
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace kdi {

using Int = mpz_class;
using Rat = mpq_class;

// Raised when an exact computation detects an inconsistency (non-real value
// where a real one is required, failed certification, inexact division, ...).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for invalid caller input (parity violations, unsupported shapes, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// a / b in canonical form (the two-argument mpq_class constructor does not
// canonicalize).
inline Rat frac(long a, long b) {
  if (b == 0) throw ComputationError("frac: zero denominator");
  Rat r(a, b);
  r.canonicalize();
  return r;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline Rat parse_rat(const std::string& s) {
  Rat r;
  if (s.empty() || r.set_str(s, 10) != 0)
    throw ArgumentError("not a rational number: '" + s + "'");
  if (r.get_den() == 0) throw ArgumentError("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// Integer exponentiation of a rational (negative exponents invert).
inline Rat rat_pow(const Rat& base, long e) {
  if (e < 0) {
    if (is_zero(base)) throw ComputationError("zero raised to a negative power");
    return rat_pow(Rat(base.get_den(), base.get_num()), -e);
  }
  Rat result = 1, b = base;
  while (e > 0) {
    if (e & 1) result *= b;
    e >>= 1;
    if (e) b *= b;
  }
  result.canonicalize();
  return result;
}

// a + b i with a, b rational.
class GaussRat {
 public:
  GaussRat() = default;
  GaussRat(const Rat& re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussRat(long re) : re_(re) {}        // NOLINT(google-explicit-constructor)
  GaussRat(Rat re, Rat im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussRat i() { return GaussRat(Rat(0), Rat(1)); }

  // i^k for any integer k.
  static GaussRat i_pow(long k) {
    switch (((k % 4) + 4) % 4) {
      case 0: return GaussRat(1);
      case 1: return GaussRat(Rat(0), Rat(1));
      case 2: return GaussRat(-1);
      default: return GaussRat(Rat(0), Rat(-1));
    }
  }

  const Rat& re() const { return re_; }
  const Rat& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussRat conj() const { return GaussRat(re_, -im_); }
  Rat norm() const { return re_ * re_ + im_ * im_; }

  GaussRat& operator+=(const GaussRat& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRat& operator*=(const GaussRat& o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    Rat r = re_ * o.re_ - im_ * o.im_;
    Rat m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  GaussRat& operator/=(const GaussRat& o) {
    if (o.is_zero()) throw ComputationError("GaussRat division by zero");
    if (o.is_real()) {
      re_ /= o.re_;
      im_ /= o.re_;
      return *this;
    }
    Rat n = o.norm();
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
  }
  GaussRat operator-() const { return GaussRat(-re_, -im_); }

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  std::string str() const {
    if (is_real()) return rat_to_string(re_);
    return "(" + rat_to_string(re_) + (sgn(im_) < 0 ? "-" : "+") +
           rat_to_string(abs(im_)) + "i)";
  }

 private:
  Rat re_{0};
  Rat im_{0};
};

// Extract the real part of a value that must be real; a nonzero imaginary part
// means an internal inconsistency upstream.
inline Rat as_real(const GaussRat& a, const std::string& context = "") {
  if (!a.is_real())
    throw ComputationError("expected a real value, got " + a.str() +
                           (context.empty() ? "" : " (" + context + ")"));
  return a.re();
}

}  // namespace kdi
