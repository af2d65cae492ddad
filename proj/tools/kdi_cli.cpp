// kdi: command-line front end for the K-theoretic Donaldson invariant pipeline.
//
// Exit codes: 0 success, 1 a verification check failed, 2 invalid arguments or
// parity violation, 3 depth limit exceeded, 4 internal computation error.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "kdi/blowpoly.hpp"
#include "kdi/pipeline.hpp"
#include "kdi/tables.hpp"
#include "kdi/wallcross.hpp"

#ifndef KDI_DEFAULT_DATA_DIR
#define KDI_DEFAULT_DATA_DIR "tests/data"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kdi;

namespace {

constexpr const char* kCacheVersion = "kdi-result-v1";

enum ExitCode { kOk = 0, kVerifyFailed = 1, kBadArgs = 2, kDepth = 3, kComputation = 4 };

struct Options {
  bool json_out = false;
  bool trace = false;
  bool no_cache = false;
  bool conjectures = false;
  std::string cache_dir;
  std::string data_dir = KDI_DEFAULT_DATA_DIR;
  int max_n = pipeline_limits().p2_max_n;
  int max_d = pipeline_limits().p1p1_max_d;
};

// ---------------------------------------------------------------------------
// Result cache: one JSON file per (version, command, parameters), written to a
// temporary file and renamed into place.

std::string cache_file_name(const std::string& key) {
  std::string out;
  for (char c : key) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out + ".json";
}

std::optional<json> cache_read(const Options& o, const std::string& key) {
  if (o.no_cache || o.trace || o.cache_dir.empty()) return std::nullopt;
  std::ifstream in(fs::path(o.cache_dir) / cache_file_name(key));
  if (!in.good()) return std::nullopt;
  try {
    json j = json::parse(in);
    if (j.value("key", "") != key) return std::nullopt;
    return j.at("result");
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entries are recomputed and overwritten
  }
}

void cache_write(const Options& o, const std::string& key, const json& result) {
  if (o.no_cache || o.cache_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(o.cache_dir, ec);
  const fs::path target = fs::path(o.cache_dir) / cache_file_name(key);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out.good()) return;
    out << json{{"key", key}, {"result", result}}.dump() << "\n";
    if (!out.good()) return;
  }
  fs::rename(tmp, target, ec);
  if (ec) fs::remove(tmp, ec);
}

// ---------------------------------------------------------------------------
// Output.

std::string lam(const LPoly& p) { return p.str("Lambda"); }

std::string rational_str(const LambdaRational& x) {
  std::string num = lam(x.stripped_numerator());
  const int a = x.lambda_pow(), b = x.one_minus_l4_pow();
  if (a < 0) num = "Lambda^" + std::to_string(-a) + " * (" + num + ")";
  std::string den;
  if (a > 0) den += "Lambda^" + std::to_string(a);
  if (b != 0) den += std::string(den.empty() ? "" : " ") + "(1 - Lambda^4)^" + std::to_string(b);
  if (den.empty()) return num;
  if (a < 0 || x.stripped_numerator().terms().size() <= 1) return num + " / " + (a > 0 && b != 0 ? "(" + den + ")" : den);
  return "(" + num + ") / " + (a > 0 && b != 0 ? "(" + den + ")" : den);
}

void print_text(const InvariantResult& res) {
  std::cout << "surface:   " << res.surface << "\n";
  std::cout << "c1:        " << res.c1 << "\n";
  std::cout << "L:         " << res.L << "\n";
  std::cout << "r:         " << res.r << "\n";
  if (res.exact)
    std::cout << "validity:  exact\n";
  else
    std::cout << "validity:  agrees with the invariant in all Lambda-degrees above " << res.equiv_threshold << "\n";
  const ClosedSplit sp = split_closed(res.closed);
  std::string closed = res.closed.is_laurent_polynomial() ? lam(sp.polynomial) : rational_str(sp.fraction);
  if (!res.closed.is_laurent_polynomial() && !sp.polynomial.is_zero()) closed += " + (" + lam(sp.polynomial) + ")";
  std::cout << "closed:    " << closed << "\n";
  std::cout << "series:    " << lam(res.series_prefix) << " + O(Lambda^" << res.prefix_order + 1 << ")\n";
  for (auto& [k, v] : res.checks.items()) std::cout << "check:     " << k << " = " << v.dump() << "\n";
  for (auto& p : res.provenance) std::cout << "route:     " << p << "\n";
}

void emit(const Options& o, const json& j) {
  if (o.json_out)
    std::cout << j.dump(2) << "\n";
  else
    print_text(result_from_json(j));
}

// Looks up the cache, otherwise computes; then prints.
int run_cached(const Options& o, const std::string& key, const std::function<json(std::ostream*)>& compute) {
  std::optional<json> j = cache_read(o, key);
  if (!j) {
    j = compute(o.trace ? &std::cerr : nullptr);
    cache_write(o, key, *j);
  }
  emit(o, *j);
  return kOk;
}

void apply_limits(const Options& o) {
  pipeline_limits().p2_max_n = o.max_n;
  pipeline_limits().p1p1_max_d = o.max_d;
}

// ---------------------------------------------------------------------------
// Commands.

struct P2Args {
  int n = 0;
  std::string c1 = "0";
  int r = 0;
  std::optional<int> k;
};

P2C1 parse_p2_c1(const std::string& s) {
  if (s == "0") return P2C1::Zero;
  if (s == "H") return P2C1::H;
  throw ArgumentError("p2: c1 must be 0 or H, got " + s);
}

P1P1C1 parse_p1p1_c1(const std::string& s) {
  if (s == "0") return P1P1C1::Zero;
  if (s == "F") return P1P1C1::F;
  if (s == "G") return P1P1C1::G;
  if (s == "FG" || s == "F+G") return P1P1C1::FG;
  throw ArgumentError("p1p1: c1 must be 0, F, G or FG, got " + s);
}

int cmd_p2(const Options& o, const P2Args& a) {
  const P2C1 c1 = parse_p2_c1(a.c1);
  detail::check_depth(a.n, o.max_n, "p2: n");
  std::string key = std::string(kCacheVersion) + "_p2_c1-" + to_string(c1) + "_n-" + std::to_string(a.n) + "_r-" +
                    std::to_string(a.r) + "_k-" + std::to_string(a.k.value_or(a.n)) + (o.conjectures ? "_conj" : "");
  return run_cached(o, key, [&](std::ostream* trace) {
    InvariantResult res = chi_P2(c1, a.n, a.r, a.k, trace);
    if (o.conjectures) {
      const SurfaceClass L = SurfaceClass::named(P2(), "H") * a.n;
      std::optional<InvariantResult> partner;
      if (a.r == 0) {
        // c1' = L + K - c1 = (n - 3)H - c1
        const bool partner_odd = ((a.n - 3 - (c1 == P2C1::H ? 1 : 0)) % 2 + 2) % 2 == 1;
        const P2C1 c1p = partner_odd ? P2C1::H : P2C1::Zero;
        partner = c1p == c1 ? res : chi_P2(c1p, a.n, 0, a.k, trace);
      }
      res.checks["conjectures"] = verify_conjectures(res, L, partner ? &*partner : nullptr);
    }
    return to_json(res);
  });
}

struct P1P1Args {
  std::string c1 = "0";
  std::optional<int> d, n, m;
  int r = 0;
};

int cmd_p1p1(const Options& o, const P1P1Args& a) {
  const P1P1C1 c1 = parse_p1p1_c1(a.c1);
  const bool diag = a.d.has_value();
  if (diag == (a.n.has_value() || a.m.has_value()))
    throw ArgumentError("p1p1: give either --d or both --n and --m");
  if (!diag && !(a.n && a.m)) throw ArgumentError("p1p1: --n and --m must be given together");
  if (diag && a.r != 0) throw ArgumentError("p1p1: point insertions need --n and --m");
  if (diag)
    detail::check_depth(*a.d, o.max_d, "p1p1: d");
  else
    detail::check_depth(*a.n + *a.m, o.max_n, "p1p1: n + m");
  const int n = diag ? *a.d : *a.n, m = diag ? *a.d : *a.m;
  const std::string key = std::string(kCacheVersion) + "_p1p1_c1-" + to_string(c1) + (diag ? "_diag" : "_gen") +
                          "_n-" + std::to_string(n) + "_m-" + std::to_string(m) + "_r-" + std::to_string(a.r) +
                          (o.conjectures ? "_conj" : "");
  auto route = [&](P1P1C1 c, std::ostream* trace) {
    return diag ? chi_P1P1_diag(c, n, trace) : chi_P1P1_general(c, n, m, a.r, trace);
  };
  return run_cached(o, key, [&](std::ostream* trace) {
    InvariantResult res = route(c1, trace);
    if (o.conjectures) {
      const SurfaceClass L = SurfaceClass::of(P1xP1(), {n, m});
      std::optional<InvariantResult> partner;
      if (a.r == 0) {
        // c1' = L + K - c1 = (n - 2)F + (m - 2)G - c1, taken mod 2
        const bool f = c1 == P1P1C1::F || c1 == P1P1C1::FG, g = c1 == P1P1C1::G || c1 == P1P1C1::FG;
        const bool fp = (f + n) % 2 == 1, gp = (g + m) % 2 == 1;
        const P1P1C1 c1p = fp ? (gp ? P1P1C1::FG : P1P1C1::F) : (gp ? P1P1C1::G : P1P1C1::Zero);
        partner = c1p == c1 ? res : route(c1p, trace);
      }
      res.checks["conjectures"] = verify_conjectures(res, L, partner ? &*partner : nullptr);
    }
    return to_json(res);
  });
}

struct ClassArgs {
  int s = 1;
  std::string c1 = "0", L;
  int r = 0;
};

int cmd_blowup(const Options& o, const ClassArgs& a) {
  if (a.s < 1) throw ArgumentError("blowup: s must be positive");
  const Surface& X = blowup_P2(a.s);
  const SurfaceClass c1 = parse_class(X, a.c1), L = parse_class(X, a.L);
  const long d = L.doubled()[0] / 2;
  detail::check_depth(static_cast<int>(d), o.max_n, "blowup: degree of L");
  const std::string key = std::string(kCacheVersion) + "_blowup_s-" + std::to_string(a.s) + "_c1-" + c1.str() +
                          "_L-" + L.str() + "_r-" + std::to_string(a.r);
  return run_cached(o, key, [&](std::ostream* trace) { return to_json(chi_blowup_P2(c1, L, a.r, trace)); });
}

int cmd_hatp2(const Options& o, const ClassArgs& a) {
  const Surface& X = hatP2();
  const SurfaceClass c1 = parse_class(X, a.c1), L = parse_class(X, a.L);
  const std::string key =
      std::string(kCacheVersion) + "_hatp2_c1-" + c1.str() + "_L-" + L.str() + "_r-" + std::to_string(a.r);
  return run_cached(o, key, [&](std::ostream* trace) { return to_json(chi_hatP2_H(c1, L, a.r, trace)); });
}

// ---------------------------------------------------------------------------
// Verification suites.

struct Suite {
  std::vector<std::pair<std::string, bool>> checks;
  void add(const std::string& name, const std::function<bool()>& f) {
    bool ok = false;
    try {
      ok = f();
    } catch (const std::exception& e) {
      std::cerr << name << ": " << e.what() << "\n";
    }
    checks.emplace_back(name, ok);
  }
};

LPoly lp(std::initializer_list<std::pair<int, Rat>> terms) {
  LPoly p;
  for (auto& [e, v] : terms) p.add_to(e, v);
  return p;
}

void suite_tables(Suite& s, const std::string& data_dir) {
  const json p2 = load_json_file(data_dir + "/p2_numerators.json");
  for (auto& e : p2.at("p")) {
    const int n = e.at("n").get<int>();
    if (n > 5) continue;
    const long b = binom_n2_2(n);
    s.add("P2 c1=0 n=" + std::to_string(n), [&] {
      const LPoly corr = lp({{0, -1}, {4, frac(-(n * n + 6 * n + 11), 2)}});
      return chi_P2(P2C1::Zero, n, 0).closed == closed_form(tpoly_from_json(e.at("t_poly")), static_cast<int>(b), corr);
    });
    if (n % 2 == 0)
      s.add("P2 c1=H n=" + std::to_string(n), [&] {
        return chi_P2(P2C1::H, n, 0).closed ==
               closed_form(tpoly_from_json(e.at("t_poly"), n * n - 1, true), static_cast<int>(b));
      });
  }
  const json pt = load_json_file(data_dir + "/p2_point_tables.json");
  for (auto& e : pt.at("entries")) {
    const int d = e.at("d").get<int>(), r = e.at("r").get<int>();
    if (d > 4 || r > 4 || r % 2 != 0) continue;
    s.add("P2 c1=0 d=" + std::to_string(d) + " r=" + std::to_string(r) + " (up to Laurent polynomials)", [&] {
      return equal_up_to_laurent_poly(chi_P2(P2C1::Zero, d, r).closed,
                                      closed_form(tpoly_from_json(e.at("t_poly")), static_cast<int>(binom_n2_2(d)) - r));
    });
  }
  const json pp = load_json_file(data_dir + "/p1p1_numerators.json");
  for (auto& e : pp.at("q0")) {
    const int d = e.at("d").get<int>();
    if (d > 3) continue;
    s.add("P1xP1 c1=0 d=" + std::to_string(d), [&] {
      return chi_P1P1_diag(P1P1C1::Zero, d).closed ==
             closed_form(tpoly_from_json(e.at("t_poly")), (d + 1) * (d + 1), lp({{0, -1}, {4, -(d * d + 4 * d + 5)}}));
    });
  }
  s.add("P1xP1 c1=F+G d=2", [&] {
    return chi_P1P1_diag(P1P1C1::FG, 2).closed == closed_form(tpoly_from_json(pp.at("qFG").at(0).at("t_poly"), 2), 9, lp({{2, -1}}));
  });
  s.add("P1xP1 c1=F d=2", [&] {
    return chi_P1P1_diag(P1P1C1::F, 2).closed == closed_form(tpoly_from_json(pp.at("qF").at(0).at("t_poly")), 9);
  });
}

void suite_identities(Suite& s) {
  for (int n = 1; n <= 6; ++n) {
    const std::string tag = " n=" + std::to_string(n);
    s.add("membership" + tag, [n] { return check_membership(n); });
    s.add("inversion symmetry" + tag, [n] { return verify_inversion_symmetry(n); });
    s.add("doubling" + tag, [n] { return verify_doubling(n); });
    s.add("Bezout R" + tag, [n] { return verify_bezout(bezout(BezoutKind::R, n, n + 1)); });
    s.add("Bezout S" + tag, [n] { return verify_bezout(bezout(BezoutKind::S, n, n + 1)); });
  }
}

void suite_walls(Suite& s) {
  const Surface& X = hatP2();
  auto c = [&](const char* t) { return parse_class(X, t); };
  s.add("delta(2G-F; -F+G, P) on P1xP1", [] {
    const Surface& Y = P1xP1();
    return delta(parse_class(Y, "2G-F"), parse_class(Y, "-F+G"), 1).value == lp({{4, -1}});
  });
  s.add("delta(H-3E; 4H-3E, P)", [&] { return delta(c("H-3E"), c("4H-3E"), 1).value == lp({{8, 1}}); });
  s.add("delta(-2E; 4H-2E)/2", [&] {
    return delta(c("-2E"), c("4H-2E"), 0).value * Rat(1, 2) == lp({{4, Rat(-3, 2)}, {8, 108}, {12, Rat(-1225, 2)}});
  });
  s.add("delta(-2E; 4H-3E)/2", [&] {
    return delta(c("-2E"), c("4H-3E"), 0).value * Rat(1, 2) ==
           lp({{4, -2}, {8, 291}, {12, -3531}, {16, Rat(16215, 2)}});
  });
  s.add("delta(-4E; 4H-3E)/2", [&] {
    return delta(c("-4E"), c("4H-3E"), 0).value * Rat(1, 2) == lp({{16, 7}, {20, Rat(-51, 2)}});
  });
}

int cmd_verify(const Options& o, const std::string& suite) {
  Suite s;
  if (suite == "tables" || suite == "all") suite_tables(s, o.data_dir);
  if (suite == "identities" || suite == "all") suite_identities(s);
  if (suite == "walls" || suite == "all") suite_walls(s);
  bool all = true;
  for (auto& [name, ok] : s.checks) all = all && ok;
  if (o.json_out) {
    json j{{"suite", suite}, {"pass", all}, {"checks", json::array()}};
    for (auto& [name, ok] : s.checks) j["checks"].push_back({{"name", name}, {"pass", ok}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto& [name, ok] : s.checks) std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    std::cout << (all ? "all checks passed" : "some checks failed") << " (" << s.checks.size() << ")\n";
  }
  return all ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K-theoretic Donaldson invariants of P2, P1xP1 and blowups of P2"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Options o;
  if (const char* env = std::getenv("KDI_CACHE_DIR")) o.cache_dir = env;
  app.add_flag("--json", o.json_out, "print the result as JSON");
  app.add_flag("--trace", o.trace, "write every wall term as a JSON line to stderr (bypasses the cache)");
  app.add_option("--cache-dir", o.cache_dir, "result cache directory (default: $KDI_CACHE_DIR; none if unset)");
  app.add_flag("--no-cache", o.no_cache, "neither read nor write the result cache");
  app.add_flag("--conjectures", o.conjectures, "attach numerator, denominator and duality checks");
  app.add_option("--max-n", o.max_n, "largest degree on P2 (and its blowups)")->capture_default_str();
  app.add_option("--max-d", o.max_d, "largest d for P1xP1 along the diagonal")->capture_default_str();
  app.add_option("--data-dir", o.data_dir, "directory of the reference tables")->capture_default_str();

  P2Args p2a;
  auto* p2 = app.add_subcommand("p2", "P2 with L = nH");
  p2->add_option("--n", p2a.n, "degree of L")->required();
  p2->add_option("--c1", p2a.c1, "first Chern class: 0 or H")->capture_default_str();
  p2->add_option("--r", p2a.r, "power of the point class")->capture_default_str();
  p2->add_option("--k", p2a.k, "index of the Bezout certificate (n or n-1)");

  P1P1Args pa;
  auto* p1p1 = app.add_subcommand("p1p1", "P1xP1 in the chamber of F+G");
  p1p1->add_option("--c1", pa.c1, "first Chern class: 0, F, G or FG")->capture_default_str();
  p1p1->add_option("--d", pa.d, "L = dF + dG");
  p1p1->add_option("--n", pa.n, "L = nF + mG");
  p1p1->add_option("--m", pa.m, "L = nF + mG");
  p1p1->add_option("--r", pa.r, "power of the point class (with --n/--m)")->capture_default_str();

  ClassArgs ba;
  auto* blowup = app.add_subcommand("blowup", "blowup of P2 in s points near H");
  blowup->add_option("--s", ba.s, "number of blown-up points")->required();
  blowup->add_option("--c1", ba.c1, "first Chern class, e.g. E1+E2")->capture_default_str();
  blowup->add_option("--L", ba.L, "line bundle, e.g. 5H-2E1-E2")->required();
  blowup->add_option("--r", ba.r, "power of the point class")->capture_default_str();

  ClassArgs ha;
  auto* hatp2 = app.add_subcommand("hatp2", "one-point blowup of P2 in the chamber of H, L = nF + mG (m <= 2)");
  hatp2->add_option("--c1", ha.c1, "first Chern class: 0 or F")->capture_default_str();
  hatp2->add_option("--L", ha.L, "line bundle, e.g. 4H-3E")->required();
  hatp2->add_option("--r", ha.r, "power of the point class")->capture_default_str();

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "tables, identities, walls or all")
      ->check(CLI::IsMember({"tables", "identities", "walls", "all"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadArgs;
  }

  try {
    if (o.max_n < 1 || o.max_d < 1) throw ArgumentError("depth limits must be positive");
    apply_limits(o);
    if (*p2) return cmd_p2(o, p2a);
    if (*p1p1) return cmd_p1p1(o, pa);
    if (*blowup) return cmd_blowup(o, ba);
    if (*hatp2) return cmd_hatp2(o, ha);
    if (*verify) return cmd_verify(o, suite);
  } catch (const DepthLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDepth;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArgs;
  } catch (const ComputationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kComputation;
  }
  return kBadArgs;
}
