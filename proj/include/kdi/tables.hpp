// Reading the reference tables in tests/data: polynomials in t = Lambda^4 stored
// as [[exponent, coefficient], ...] with integer coefficients.
#pragma once

#include <fstream>
#include <string>

#include "json.hpp"
#include "kdi/lpoly.hpp"
#include "kdi/scalars.hpp"

namespace kdi {

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ArgumentError("cannot open data file " + path);
  return nlohmann::json::parse(in);
}

// t^k -> Lambda^{4k + shift}, or Lambda^{shift - 4k} when inverted.
inline LPoly tpoly_from_json(const nlohmann::json& a, int shift = 0, bool inverted = false) {
  LPoly p;
  for (auto& term : a) {
    const int k = term.at(0).get<int>();
    const Int c(term.at(1).is_string() ? term.at(1).get<std::string>() : std::to_string(term.at(1).get<long long>()));
    p.add_to(inverted ? shift - 4 * k : 4 * k + shift, Rat(c));
  }
  return p;
}

// N / (1 - Lambda^4)^b + poly.
inline LambdaRational closed_form(const LPoly& numer, int b, const LPoly& poly = LPoly()) {
  return LambdaRational(numer, b) + LambdaRational(poly);
}

inline long binom_n2_2(int n) { return static_cast<long>(n + 2) * (n + 1) / 2; }

}  // namespace kdi
