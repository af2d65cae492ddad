// Theta constants, u, h(Lambda), y = e^{h/2}, normalized theta4(h), M, h*, u'
// and hyperbolic functions of multiples of h, as truncated series.
//
// Internally everything is a TSeries in t = i q^{-1} Lambda, s = q^4 (see
// tseries.hpp).  In these variables
//   theta2 = 2q * th2q(s),   theta3 = th3(s),   theta4 = th4(s),
//   u Lambda^2   = -(u q^2) t^2,        Lambda^4 = s t^4,
//   Lambda^2 u'  = -(u' q^2) t^2,
//   h   = (2 / (th2q th3)) * int_0^t (1 - (u q^2) x^2 + s x^4)^{-1/2} dx,
//   M   = 2 (1 - (u q^2) t^2 + s t^4)^{1/2},
//   h*  = 4 t / (th2q th3 M),
//   theta4~(h) = sum_n (-1)^n s^{n^2} y^{2n} / th4,
// all with rational coefficients.
#pragma once

#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <tuple>

#include "kdi/series.hpp"
#include "kdi/tseries.hpp"

namespace kdi {

// Pure q^4-series constants.
struct ThetaConstants {
  SSeries th2q;   // theta2 / q = 2 + 2 s^2 + 2 s^6 + ...
  SSeries th3;    // theta3
  SSeries th4;    // theta4
  SSeries uq2;    // u q^2
  SSeries upq2;   // u' q^2

  explicit ThetaConstants(int S) {
    th2q.assign(S + 1, Rat(0));
    th3.assign(S + 1, Rat(0));
    th4.assign(S + 1, Rat(0));
    // theta2/q = sum_n s^{n(n+1)}, theta3 = sum_n s^{n^2}, theta4 = sum_n (-1)^n s^{n^2}.
    for (long n = -S - 2; n <= S + 2; ++n) {
      long e2 = n * (n + 1);
      if (e2 >= 0 && e2 <= S) th2q[e2] += 1;
      long e3 = n * n;
      if (e3 <= S) {
        th3[e3] += 1;
        th4[e3] += (n % 2 == 0) ? 1 : -1;
      }
    }
    const SSeries a = s_mul(th2q, th2q);  // (theta2/q)^2
    const SSeries b = s_mul(th3, th3);
    const SSeries ia = s_inverse(a), ib = s_inverse(b);
    // u q^2 = -s (theta2/q)^2/theta3^2 - theta3^2/(theta2/q)^2
    const SSeries x = s_mul(a, ib), y = s_mul(b, ia);
    uq2.assign(S + 1, Rat(0));
    for (int i = 0; i <= S; ++i) uq2[i] = -y[i] - (i >= 1 ? x[i - 1] : Rat(0));
    // u' q^2 = 2 theta4^8 / ((theta2/q)^2 theta3^2)
    SSeries t8 = s_pow(th4, Rat(8));
    upq2 = s_mul(s_mul(t8, ia), ib);
    for (auto& v : upq2) v *= 2;
  }
};

class ThetaContext {
 public:
  // Engine box: t-degree <= T, s-degree <= S.
  ThetaContext(int T, int S) : T_(T), S_(S), k_(S + 1) {
    if (T < 1 || S < 0) throw ArgumentError("ThetaContext: orders too small");
  }
  // Orders in the (q, Lambda) sense: Lambda-series mod Lambda^{lorder+1} whose
  // coefficients are needed mod q^{qorder+1}.
  static ThetaContext for_orders(int qorder, int lorder) {
    int S = std::max(0, (qorder + lorder) / 4);
    return ThetaContext(lorder + 1, S);
  }

  int T() const { return T_; }
  int S() const { return S_; }
  const ThetaConstants& constants() const { return k_; }

  // ---- engine ingredients (TSeries) ----
  const TSeries& th4_t() { return memo("th4", [&] { return TSeries::from_s(k_.th4, T_, S_); }); }

  // 1 + u Lambda^2 + Lambda^4 in (t, s)
  const TSeries& quartic() {
    return memo("quartic", [&] {
      TSeries r = TSeries::constant(Rat(1), T_, S_);
      for (int b = 0; b <= S_; ++b)
        if (T_ >= 2) r.ref(2, b) = -k_.uq2[b];
      if (T_ >= 4 && S_ >= 1) r.ref(4, 1) += 1;
      return r;
    });
  }

  // 2 / (th2q th3) as a constant row
  const SSeries& two_over_th2q_th3() {
    if (two_over_.empty()) {
      two_over_ = s_inverse(s_mul(k_.th2q, k_.th3));
      for (auto& v : two_over_) v *= 2;
    }
    return two_over_;
  }

  const TSeries& h_t() {
    return memo("h", [&] {
      TSeries integrand = quartic().truncated(T_ - 1, S_).pow(Rat(-1, 2));
      TSeries r = integrand.integrate_t();
      return r * TSeries::from_s(two_over_th2q_th3(), T_, S_);
    });
  }

  const TSeries& M_t() {
    return memo("M", [&] { return quartic().pow(Rat(1, 2)) * Rat(2); });
  }

  // M^r (r >= 0)
  const TSeries& M_pow(int r) {
    return memo("Mpow:" + std::to_string(r), [&] {
      if (r < 0) throw ArgumentError("M_pow: negative exponent");
      return M_t().pow(Rat(r));
    });
  }

  const TSeries& hstar_t() {
    return memo("hstar", [&] {
      SSeries c = two_over_th2q_th3();
      for (auto& v : c) v *= 2;  // 4 / (th2q th3)
      TSeries tt = TSeries::monomial(Rat(1), 1, 0, T_, S_);
      return (tt * TSeries::from_s(c, T_, S_)) * M_t().inverse();
    });
  }

  // Lambda^2 u'
  const TSeries& L2uprime_t() {
    return memo("L2uprime", [&] {
      TSeries r(0, T_, S_);
      if (T_ >= 2)
        for (int b = 0; b <= S_; ++b) r.ref(2, b) = -k_.upq2[b];
      return r;
    });
  }

  // e^{l h} with l = twol / 2, i.e. y^{twol}.
  const TSeries& exp_lh_t(int twol) {
    return memo("exp:" + std::to_string(twol), [&] {
      if (twol == 0) return TSeries::constant(Rat(1), T_, S_);
      return (h_t() * frac(twol, 2)).exp();
    });
  }
  const TSeries& y_t() { return exp_lh_t(1); }

  const TSeries& sinh_lh_t(int twol) {
    return memo("sinh:" + std::to_string(twol),
                [&] { return (exp_lh_t(twol) - exp_lh_t(-twol)) * Rat(1, 2); });
  }
  const TSeries& cosh_lh_t(int twol) {
    return memo("cosh:" + std::to_string(twol),
                [&] { return (exp_lh_t(twol) + exp_lh_t(-twol)) * Rat(1, 2); });
  }
  const TSeries& inv_sinh_lh_t(int twol) {
    return memo("invsinh:" + std::to_string(twol), [&] {
      if (twol == 0) throw ArgumentError("inv_sinh_lh: l = 0");
      return sinh_lh_t(twol).inverse();
    });
  }
  const TSeries& coth_lh_t(int twol) {
    return memo("coth:" + std::to_string(twol), [&] {
      if (twol == 0) throw ArgumentError("coth_lh: l = 0");
      return cosh_lh_t(twol) * inv_sinh_lh_t(twol);
    });
  }
  const TSeries& tanh_lh_t(int twol) {
    return memo("tanh:" + std::to_string(twol),
                [&] { return sinh_lh_t(twol) * cosh_lh_t(twol).inverse(); });
  }

  // theta4~(h) = theta4(h) / theta4
  const TSeries& theta4t_t() {
    return memo("theta4t", [&] {
      TSeries num = TSeries::constant(Rat(1), T_, S_);
      for (int n = 1; n * n <= S_; ++n) {
        TSeries pair = (exp_lh_t(2 * n) + exp_lh_t(-2 * n)).shift_s(n * n);
        num = (n % 2 == 0) ? num + pair : num - pair;
      }
      return num * TSeries::from_s(s_inverse(k_.th4), T_, S_);
    });
  }
  // theta1~(h) = theta1(h) / theta4; theta1(h) = sum i^{2n-1} q^{(2n+1)^2} y^{2n+1}.
  // As a TSeries: theta1(h) * i/q = sum_n (-1)^n s^{n(n+1)} y^{2n+1}, so the
  // stored object is theta1~(h) * i / q (one power of t short of Lambda).
  const TSeries& theta1t_iq_t() {
    return memo("theta1t_iq", [&] {
      TSeries num(0, T_, S_);
      for (int n = -S_ - 2; n <= S_ + 1; ++n) {
        long e = static_cast<long>(n) * (n + 1);
        if (e > S_) continue;
        TSeries term = exp_lh_t(2 * n + 1).shift_s(static_cast<int>(e));
        num = (n % 2 == 0) ? num + term : num - term;
      }
      return num * TSeries::from_s(s_inverse(k_.th4), T_, S_);
    });
  }

  // theta4~(h)^e for any integer e.
  const TSeries& theta4t_pow(long e) {
    return memo("theta4t_pow:" + std::to_string(e), [&] {
      if (e == 0) return TSeries::constant(Rat(1), T_, S_);
      if (e == 1) return theta4t_t();
      return theta4t_t().pow(Rat(e));
    });
  }
  // theta4^sigma as a TSeries (row t^0).
  const TSeries& th4_pow(long sigma) {
    return memo("th4pow:" + std::to_string(sigma),
                [&] { return TSeries::from_s(s_pow(k_.th4, Rat(sigma)), T_, S_); });
  }

  // ---- (q, Lambda)-representation views ----
  // theta_k(0) as a q-series through q^{4S+3}.
  QLaurent theta_const(int k) const {
    if (k == 1) throw ArgumentError("theta_const: theta1(0) = 0");
    if (k < 2 || k > 4) throw ArgumentError("theta_const: index must be 2, 3 or 4");
    const long qt = 4L * S_ + 3;
    std::vector<GaussRat> c(4 * S_ + 2);
    if (k == 2) {
      for (int b = 0; b <= S_; ++b) c[4 * b + 1] = GaussRat(k_.th2q[b]);  // q * th2q(q^4)
      return QLaurent(0, c, qt + 1);
    }
    const SSeries& f = (k == 3) ? k_.th3 : k_.th4;
    for (int b = 0; b <= S_; ++b) c[4 * b] = GaussRat(f[b]);
    return QLaurent(0, c, qt);
  }
  QLaurent u_series() const {
    std::vector<GaussRat> c(4 * S_ + 1);
    for (int b = 0; b <= S_; ++b) c[4 * b] = GaussRat(k_.uq2[b]);
    return QLaurent(-2, c, 4L * S_ + 1);
  }
  QLaurent uprime_series() const {
    std::vector<GaussRat> c(4 * S_ + 1);
    for (int b = 0; b <= S_; ++b) c[4 * b] = GaussRat(k_.upq2[b]);
    return QLaurent(-2, c, 4L * S_ + 1);
  }
  LSeries h_of_lambda() { return h_t().to_lseries(); }
  LSeries exp_lh(int twol) { return exp_lh_t(twol).to_lseries(); }
  LSeries sinh_lh(int twol) { return sinh_lh_t(twol).to_lseries(); }
  LSeries cosh_lh(int twol) { return cosh_lh_t(twol).to_lseries(); }
  LSeries coth_lh(int twol) { return coth_lh_t(twol).to_lseries(); }
  LSeries tanh_lh(int twol) { return tanh_lh_t(twol).to_lseries(); }
  LSeries inv_sinh_lh(int twol) { return inv_sinh_lh_t(twol).to_lseries(); }
  LSeries theta4t_h_pow(long e) { return theta4t_pow(e).to_lseries(); }
  LSeries M_series() { return M_t().to_lseries(); }
  LSeries hstar_series() { return hstar_t().to_lseries(); }

  size_t memo_size() const { return memo_.size(); }

 private:
  template <class F>
  const TSeries& memo(const std::string& key, F&& make) {
    auto it = memo_.find(key);
    if (it != memo_.end()) return *it->second;
    auto p = std::make_unique<TSeries>(make());
    const TSeries& ref = *p;
    memo_.emplace(key, std::move(p));
    return ref;
  }

  int T_, S_;
  ThetaConstants k_;
  SSeries two_over_;
  std::map<std::string, std::unique_ptr<TSeries>> memo_;
};

}  // namespace kdi
