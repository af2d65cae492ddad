// Rational surfaces (P2, blowups of P2, P1xP1), their cohomology lattices,
// class arithmetic and the bounded wall enumerators used by the pipelines.
//
// Classes are stored in doubled integer coordinates (2 * class) over the
// surface's basis, so that half-integral classes such as G = (H+E)/2 on the
// one-point blowup of P2 are exact.
#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "kdi/scalars.hpp"

namespace kdi {

struct Surface {
  std::string name;
  std::vector<std::string> labels;             // basis labels
  std::vector<std::vector<long>> gram;         // intersection form on the basis
  std::vector<long> K2;                        // 2 * K_X in basis coordinates
  int sigma = 0;                               // signature
  std::map<std::string, std::vector<long>> aliases;  // 2 * (named class)
  int rank() const { return static_cast<int>(labels.size()); }
};

namespace detail {
inline Surface make_blowup(int n) {
  Surface s;
  s.labels.push_back("H");
  for (int i = 1; i <= n; ++i) s.labels.push_back(n == 1 ? "E" : "E" + std::to_string(i));
  const int r = n + 1;
  s.gram.assign(r, std::vector<long>(r, 0));
  s.gram[0][0] = 1;
  for (int i = 1; i < r; ++i) s.gram[i][i] = -1;
  s.K2.assign(r, 2);
  s.K2[0] = -6;
  s.sigma = 1 - n;
  s.name = n == 0 ? "P2" : "P2#" + std::to_string(n);
  return s;
}
}  // namespace detail

// P2 blown up in n points (n = 0 gives P2): basis H, E1..En (E for n = 1).
inline const Surface& blowup_P2(int n) {
  if (n < 0) throw ArgumentError("blowup_P2: negative number of points");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Surface>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto s = std::make_unique<Surface>(detail::make_blowup(n));
  if (n == 1) {
    s->name = "hatP2";
    s->aliases["F"] = {2, -2};  // H - E
    s->aliases["G"] = {1, 1};   // (H + E) / 2
  }
  if (n == 2) {
    // identification with P1xP1 blown up in a point
    s->name = "tildeP2";
    s->aliases["F"] = {2, -2, 0};   // H - E1
    s->aliases["G"] = {2, 0, -2};   // H - E2
    s->aliases["E"] = {2, -2, -2};  // H - E1 - E2
  }
  const Surface& ref = *s;
  cache.emplace(n, std::move(s));
  return ref;
}
inline const Surface& P2() { return blowup_P2(0); }
inline const Surface& hatP2() { return blowup_P2(1); }
inline const Surface& tildeP2() { return blowup_P2(2); }

inline const Surface& P1xP1() {
  static const Surface s = [] {
    Surface x;
    x.name = "P1xP1";
    x.labels = {"F", "G"};
    x.gram = {{0, 1}, {1, 0}};
    x.K2 = {-4, -4};
    x.sigma = 0;
    return x;
  }();
  return s;
}

class SurfaceClass {
 public:
  SurfaceClass() = default;
  SurfaceClass(const Surface& X, std::vector<long> doubled) : X_(&X), c2_(std::move(doubled)) {
    if (static_cast<int>(c2_.size()) != X.rank()) throw ArgumentError("SurfaceClass: wrong number of coordinates");
  }
  static SurfaceClass zero(const Surface& X) { return SurfaceClass(X, std::vector<long>(X.rank(), 0)); }
  // Integral coordinates over the basis.
  static SurfaceClass of(const Surface& X, const std::vector<long>& coords) {
    std::vector<long> d(coords);
    for (auto& v : d) v *= 2;
    return SurfaceClass(X, d);
  }
  static SurfaceClass K(const Surface& X) { return SurfaceClass(X, X.K2); }
  static SurfaceClass named(const Surface& X, const std::string& label);

  const Surface& surface() const {
    if (!X_) throw ArgumentError("SurfaceClass: no surface");
    return *X_;
  }
  const std::vector<long>& doubled() const { return c2_; }
  // coordinate i as a rational number
  Rat coord(int i) const { return frac(c2_.at(i), 2); }
  bool is_integral() const {
    for (long v : c2_)
      if (v % 2 != 0) return false;
    return true;
  }
  bool is_zero() const {
    for (long v : c2_)
      if (v != 0) return false;
    return true;
  }
  // (this) / 2 is integral, i.e. the class is divisible by 2 in H^2(X, Z).
  bool divisible_by_two() const {
    for (long v : c2_)
      if (v % 4 != 0) return false;
    return true;
  }

  SurfaceClass operator+(const SurfaceClass& o) const {
    check_same(o);
    std::vector<long> r(c2_);
    for (size_t i = 0; i < r.size(); ++i) r[i] += o.c2_[i];
    return SurfaceClass(*X_, r);
  }
  SurfaceClass operator-() const {
    std::vector<long> r(c2_);
    for (auto& v : r) v = -v;
    return SurfaceClass(surface(), r);
  }
  SurfaceClass operator-(const SurfaceClass& o) const { return *this + (-o); }
  SurfaceClass operator*(long k) const {
    std::vector<long> r(c2_);
    for (auto& v : r) v *= k;
    return SurfaceClass(surface(), r);
  }
  friend SurfaceClass operator*(long k, const SurfaceClass& c) { return c * k; }
  friend bool operator==(const SurfaceClass& a, const SurfaceClass& b) {
    return a.X_ == b.X_ && a.c2_ == b.c2_;
  }
  friend bool operator!=(const SurfaceClass& a, const SurfaceClass& b) { return !(a == b); }
  friend bool operator<(const SurfaceClass& a, const SurfaceClass& b) { return a.c2_ < b.c2_; }

  // Rendering over the basis labels, e.g. "4H-2E1-2E2", "7/2H-5/2E".
  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < surface().rank(); ++i) {
      if (c2_[i] == 0) continue;
      Rat v = coord(i);
      os << (sgn(v) < 0 ? "-" : (first ? "" : "+"));
      Rat a = abs(v);
      if (a != 1) os << rat_to_string(a);
      os << X_->labels[i];
      first = false;
    }
    return first ? "0" : os.str();
  }

  void check_same(const SurfaceClass& o) const {
    if (X_ != o.X_) throw ArgumentError("classes live on different surfaces");
  }

 private:
  const Surface* X_ = nullptr;
  std::vector<long> c2_;
};

inline SurfaceClass SurfaceClass::named(const Surface& X, const std::string& label) {
  for (int i = 0; i < X.rank(); ++i)
    if (X.labels[i] == label) {
      std::vector<long> d(X.rank(), 0);
      d[i] = 2;
      return SurfaceClass(X, d);
    }
  auto it = X.aliases.find(label);
  if (it != X.aliases.end()) return SurfaceClass(X, it->second);
  if (label == "K") return K(X);
  throw ArgumentError("unknown class label '" + label + "' on " + X.name);
}

// Exact intersection pairing.
inline Rat pair(const SurfaceClass& a, const SurfaceClass& b) {
  a.check_same(b);
  const Surface& X = a.surface();
  long acc = 0;
  for (int i = 0; i < X.rank(); ++i)
    for (int j = 0; j < X.rank(); ++j) acc += a.doubled()[i] * X.gram[i][j] * b.doubled()[j];
  return frac(acc, 4);
}
inline Rat square(const SurfaceClass& a) { return pair(a, a); }

// Parses a class literal such as "4H-2E1-2E2", "3F+2G", "7/2F+G", "F+G-E",
// "2*H", "-E" or "0".  Labels are the basis labels and the surface's aliases.
inline SurfaceClass parse_class(const Surface& X, const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ArgumentError("empty class literal");
  SurfaceClass acc = SurfaceClass::zero(X);
  if (s == "0") return acc;
  std::vector<std::string> names = X.labels;
  for (auto& [k, v] : X.aliases) names.push_back(k);
  names.push_back("K");
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw ArgumentError("bad class literal '" + text + "'");
    }
    size_t j = i;
    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
    Rat coef = 1;
    if (j > i) coef = parse_rat(s.substr(i, j - i));
    if (j < s.size() && s[j] == '*') ++j;
    // longest matching label
    std::string best;
    for (auto& nm : names)
      if (s.compare(j, nm.size(), nm) == 0 && nm.size() > best.size()) {
        // do not split a multi-digit index: "E1" must not match "E" followed by "1"
        size_t e = j + nm.size();
        if (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) continue;
        best = nm;
      }
    if (best.empty()) {
      if (j == s.size() && j > i) {  // a bare number is only allowed as 0
        if (sgn(coef) == 0) {
          i = j;
          continue;
        }
      }
      throw ArgumentError("bad class literal '" + text + "' at position " + std::to_string(j));
    }
    SurfaceClass base = SurfaceClass::named(X, best);
    Rat c = coef * sign;
    std::vector<long> d(X.rank());
    for (int k = 0; k < X.rank(); ++k) {
      Rat v = c * Rat(base.doubled()[k]);
      if (!is_integer(v)) throw ArgumentError("class literal '" + text + "' is not in (1/2)H^2");
      d[k] = v.get_num().get_si();
    }
    acc = acc + SurfaceClass(X, d);
    i = j + best.size();
  }
  return acc;
}

// xi is a class of type (c1, d): xi + c1 divisible by 2 and d + xi^2 >= 0.
inline bool is_wall_class(const SurfaceClass& xi, const SurfaceClass& c1, long d) {
  if (!xi.is_integral()) throw ArgumentError("is_wall_class: xi must be integral");
  return (xi + c1).divisible_by_two() && Rat(d) + square(xi) >= 0;
}

// Non-vanishing criterion of the wallcrossing term:
// delta_xi(L, P^r) can only be nonzero if -xi^2 <= |<xi, L - K>| + r + 2.
inline bool wall_may_contribute(const SurfaceClass& xi, const SurfaceClass& L, int r) {
  const SurfaceClass LK = L - SurfaceClass::K(xi.surface());
  return -square(xi) <= abs(pair(xi, LK)) + r + 2;
}

struct Wall {
  SurfaceClass xi;
  Rat weight;  // 1 or 1/2
};

// Walls xi = aF - bG on the one-point blowup of P2 between the polarization
// F_+ (close to F) and H, with <xi, H> >= 0 > <xi, F>, of type c1 (0 or F),
// that can contribute to delta_xi(L, P^s) for some 0 <= s <= r.
// L = alpha F + m G with m in {0, 1, 2}.  Weight 1/2 on <xi, H> = 0.
//
// Bounds: with b = -<xi,F> (even, >= 2) and a = <xi,G> (integer > 0) the
// criterion 2ab <= |b(alpha+2) - a(m+2)| + s + 2 gives
//   a <= (alpha+2)/2 + s/4                 if a(m+2) <= b(alpha+2),
//   (2-m) a <= s - 2 alpha - 2             if a(m+2) >= b(alpha+2).
// The box is enlarged by a margin of 4 and the margin is checked to be empty.
inline std::vector<Wall> walls_hatP2_F_to_H(const SurfaceClass& c1, const SurfaceClass& L, int r) {
  const Surface& X = hatP2();
  if (&L.surface() != &X || &c1.surface() != &X) throw ArgumentError("walls_hatP2_F_to_H: classes must live on hatP2");
  const SurfaceClass F = SurfaceClass::named(X, "F"), G = SurfaceClass::named(X, "G");
  const SurfaceClass H = SurfaceClass::named(X, "H");
  if (!(c1.is_zero() || c1 == F)) throw ArgumentError("walls_hatP2_F_to_H: c1 must be 0 or F");
  if (!L.is_integral()) throw ArgumentError("walls_hatP2_F_to_H: L = " + L.str() + " is not integral");
  const Rat alpha = pair(L, G), mr = pair(L, F);
  if (!is_integer(mr) || mr < 0 || mr > 2)
    throw ArgumentError("walls_hatP2_F_to_H: unsupported L = " + L.str() + " (need alpha F + m G, m = 0, 1, 2)");
  const long m = mr.get_num().get_si();
  if (alpha + 2 <= 0) throw ArgumentError("walls_hatP2_F_to_H: unsupported L = " + L.str());
  Rat amax = (alpha + 2) / 2 + Rat(r, 4);
  if (m < 2) {
    amax = std::max(amax, Rat((Rat(r) - 2 * alpha - 2) / (2 - m)));
  } else if (Rat(r) - 2 * alpha - 2 >= 0) {
    throw ArgumentError("walls_hatP2_F_to_H: infinitely many walls can contribute for L = " + L.str() +
                        " with point power " + std::to_string(r));
  }
  const long A = static_cast<long>(std::floor(amax.get_d())) + 1;
  std::vector<Wall> out;
  for (long a = 1; a <= A + 4; ++a)
    for (long b = 2; b <= 2 * a; b += 2) {
      SurfaceClass xi = F * a - G * b;
      if (!xi.is_integral() || !(xi + c1).divisible_by_two()) continue;
      if (!wall_may_contribute(xi, L, r)) continue;
      if (a > A) throw ComputationError("walls_hatP2_F_to_H: wall " + xi.str() + " beyond the proven bound");
      out.push_back({xi, pair(xi, H) == 0 ? Rat(1, 2) : Rat(1)});
    }
  return out;
}

// Walls on P1xP1 between the polarizations F_+ (close to F) and G_+: classes
// xi = bG - aF of type c1 with <xi, F> > 0 > <xi, G>, i.e. a, b > 0, that can
// contribute to delta_xi(L, P^s) for some 0 <= s <= r.
//
// With p = <F, L-K>, q = <G, L-K>, c = r + 2 the criterion reads
// 2ab <= |bq - ap| + c <= a|p| + b|q| + c.  If the smallest a, b allowed by the
// parity satisfy 2a > |q| and 2b > |p|, then (2a - |q|)(2b - |p|) <= |pq| + 2c
// bounds both; otherwise infinitely many walls may contribute and we refuse.
inline std::vector<Wall> walls_P1P1_F_to_G(const SurfaceClass& c1, const SurfaceClass& L, int r) {
  const Surface& X = P1xP1();
  if (&L.surface() != &X || &c1.surface() != &X) throw ArgumentError("walls_P1P1_F_to_G: classes must live on P1xP1");
  if (!L.is_integral() || !c1.is_integral()) throw ArgumentError("walls_P1P1_F_to_G: L and c1 must be integral");
  const SurfaceClass F = SurfaceClass::named(X, "F"), G = SurfaceClass::named(X, "G");
  const SurfaceClass LK = L - SurfaceClass::K(X);
  const long p = std::labs(pair(F, LK).get_num().get_si()), q = std::labs(pair(G, LK).get_num().get_si());
  const long c = r + 2;
  const long a0 = (c1.doubled()[0] / 2) % 2 != 0 ? 1 : 2, b0 = (c1.doubled()[1] / 2) % 2 != 0 ? 1 : 2;
  if (2 * a0 <= q || 2 * b0 <= p)
    throw ArgumentError("walls_P1P1_F_to_G: infinitely many walls can contribute for L = " + L.str());
  const long Amax = (p * q + 2 * c + q) / 2, Bmax = (p * q + 2 * c + p) / 2;
  std::vector<Wall> out;
  for (long a = a0; a <= Amax + 4; a += 2)
    for (long b = b0; b <= Bmax + 4; b += 2) {
      SurfaceClass xi = G * b - F * a;
      if (!wall_may_contribute(xi, L, r)) continue;
      if (a > Amax || b > Bmax) throw ComputationError("walls_P1P1_F_to_G: wall " + xi.str() + " beyond the proven bound");
      out.push_back({xi, Rat(1)});
    }
  return out;
}

// Walls on the two-point blowup of P2 (= P1xP1 blown up in a point) between the
// polarizations H and F+G = 2H - E1 - E2: xi = aH - b1 E1 - b2 E2 of type c1
// with <xi, H> <= 0 <= <xi, 2H-E1-E2>, not both zero, that can contribute to
// delta_xi(L, P^s) for some 0 <= s <= r.  Weight 1/2 if one inequality is an
// equality.  L = dH - m1 E1 - m2 E2.
//
// Bound: with omega = H - E1/2 - E2/2 (epsilon = 1/2, delta = 1/4) the
// criterion forces |b1| + |b2| <= 4 (max|m_i + 1| + |d + 3| + r + 2) and
// |a| <= (|b1| + |b2|) / 2.  Margin 4, checked to be empty.
inline std::vector<Wall> walls_tildeP2_H_to_FG(const SurfaceClass& c1, const SurfaceClass& L, int r) {
  const Surface& X = tildeP2();
  if (&L.surface() != &X || &c1.surface() != &X) throw ArgumentError("walls_tildeP2_H_to_FG: classes must live on tildeP2");
  if (!L.is_integral() || !c1.is_integral()) throw ArgumentError("walls_tildeP2_H_to_FG: L and c1 must be integral");
  const long d = L.doubled()[0] / 2, m1 = -L.doubled()[1] / 2, m2 = -L.doubled()[2] / 2;
  const long B = 4 * (std::max(std::labs(m1 + 1), std::labs(m2 + 1)) + std::labs(d + 3) + r + 2);
  const long Bm = B + 4;
  std::vector<Wall> out;
  for (long a = -Bm / 2; a <= 0; ++a)
    for (long b1 = -Bm; b1 <= Bm; ++b1)
      for (long b2 = -Bm; b2 <= Bm; ++b2) {
        const long bs = std::labs(b1) + std::labs(b2);
        if (bs > Bm) continue;
        const long w = 2 * a - b1 - b2;  // <xi, 2H - E1 - E2>
        if (w < 0) continue;
        if (a == 0 && w == 0) continue;
        // parity: xi + c1 divisible by 2
        if (((a + c1.doubled()[0] / 2) % 2 != 0) || ((b1 - c1.doubled()[1] / 2) % 2 != 0) ||
            ((b2 - c1.doubled()[2] / 2) % 2 != 0))
          continue;
        SurfaceClass xi = SurfaceClass::of(X, {a, -b1, -b2});
        if (!wall_may_contribute(xi, L, r)) continue;
        if (bs > B || -a > B / 2) throw ComputationError("walls_tildeP2_H_to_FG: wall " + xi.str() + " beyond the proven bound");
        out.push_back({xi, (a == 0 || w == 0) ? Rat(1, 2) : Rat(1)});
      }
  return out;
}

}  // namespace kdi
