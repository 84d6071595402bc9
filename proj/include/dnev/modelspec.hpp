#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "dnev/charfn.hpp"
#include "dnev/error.hpp"
#include "dnev/exact.hpp"
#include "dnev/models.hpp"
#include "dnev/ratfun.hpp"

namespace dnev {

/// "2", "-1/2", "i", "2+i", "3-2*i", "0.5i".
inline cplx parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  if (s.empty()) throw Error(ErrorKind::SyntaxError, "empty complex number", 0);
  Rational re(0), im(0);
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t start = i;
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') sign = s[i++] == '-' ? -1 : 1;
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string part = s.substr(i, j - i);
    if (part.empty()) throw Error(ErrorKind::SyntaxError, "dangling sign in complex number", start);
    bool imag = part.back() == 'i';
    if (imag) {
      part.pop_back();
      if (!part.empty() && part.back() == '*') part.pop_back();
      if (part.empty()) part = "1";
    }
    Rational v;
    try {
      v = parse_rational(part);
    } catch (const Error&) {
      throw Error(ErrorKind::SyntaxError, "bad complex component '" + part + "'", start);
    }
    (imag ? im : re) += sign * v;
    i = j;
  }
  return {to_double(re), to_double(im)};
}

/// Degree-d rational with small integer coefficients, numerator and denominator coprime.
inline RatFun random_rational(int degree, std::uint64_t seed) {
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "random rational needs degree >= 1");
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> coef(-5, 5), split(0, degree);
  for (;;) {
    int dn = split(gen);
    int dd = degree - dn;
    if (dd == 0) dd = degree, dn = split(gen) % degree;
    std::vector<Rational> a(dn + 1), b(dd + 1);
    for (auto& x : a) x = coef(gen);
    for (auto& x : b) x = coef(gen);
    if (a.back() == 0 || b.back() == 0) continue;
    QPoly num(a), den(b);
    if (gcd(num, den).degree() > 0) continue;
    return RatFun(num, den);
  }
}

/// rational:{num}/{den} | product:s=K,n1=N | exp:<poly> | expexp | shift:<c>:<spec> |
/// pow:<k>:<spec> | random:<d>  (seeded)
inline Model parse_model(std::string_view spec, std::uint64_t seed = 0) {
  auto colon = spec.find(':');
  std::string head(spec.substr(0, colon));
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  auto need_rest = [&] {
    if (rest.empty()) throw Error(ErrorKind::InvalidArgument, "model '" + head + "' needs an argument");
  };
  if (head == "expexp") {
    if (!rest.empty()) throw Error(ErrorKind::InvalidArgument, "expexp takes no argument");
    return exp_exp_model();
  }
  if (head == "rational") {
    need_rest();
    std::string t(rest);
    for (char& ch : t) {
      if (ch == '{') ch = '(';
      if (ch == '}') ch = ')';
    }
    return rational_model(parse_ratfun(t), "rational:" + std::string(rest));
  }
  if (head == "exp") {
    need_rest();
    RatFun p = parse_ratfun(rest);
    if (p.den().degree() != 0) throw Error(ErrorKind::InvalidArgument, "exp: exponent must be a polynomial");
    std::vector<cplx> c;
    Rational d = p.den().leading();
    for (const auto& a : p.num().coeffs()) c.emplace_back(to_double(a / d), 0.0);
    return exp_poly_model(std::move(c), "exp:" + std::string(rest));
  }
  if (head == "product") {
    need_rest();
    long s = -1, n1 = 1;
    std::string r(rest);
    std::size_t pos = 0;
    while (pos <= r.size()) {
      auto comma = r.find(',', pos);
      std::string kv = r.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "product: expected key=value, got '" + kv + "'");
      std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
      long val;
      try {
        std::size_t used = 0;
        val = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "product: bad integer '" + v + "'");
      }
      if (k == "s") s = val;
      else if (k == "n1") n1 = val;
      else throw Error(ErrorKind::InvalidArgument, "product: unknown key '" + k + "'");
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (s < 1) throw Error(ErrorKind::InvalidArgument, "product: s must be given and positive");
    return build_example_product(static_cast<int>(s), n1).model;
  }
  if (head == "shift" || head == "pow") {
    need_rest();
    auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw Error(ErrorKind::InvalidArgument, head + ": expected " + head + ":<arg>:<model>");
    Model inner = parse_model(rest.substr(c2 + 1), seed);
    std::string arg(rest.substr(0, c2));
    Model out;
    if (head == "shift") {
      out = shifted(inner, parse_complex(arg));
    } else {
      int k = 0;
      try {
        k = std::stoi(arg);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "pow: bad exponent '" + arg + "'");
      }
      out = powered(inner, k);
    }
    out.name = std::string(spec);
    return out;
  }
  if (head == "random") {
    need_rest();
    int d = 0;
    try {
      d = std::stoi(std::string(rest));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "random: bad degree");
    }
    return rational_model(random_rational(d, seed), "random:" + std::string(rest));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown model spec '" + std::string(spec) +
                                              "' (expected rational:, product:, exp:, expexp, shift:, pow:, random:)");
}

/// power:<rho> | exproot:<alpha> | exp
inline GrowthFunction parse_growth(std::string_view spec) {
  auto colon = spec.find(':');
  std::string head(spec.substr(0, colon));
  std::string arg = colon == std::string_view::npos ? "" : std::string(spec.substr(colon + 1));
  auto number = [&] {
    try {
      return to_double(parse_rational(arg));
    } catch (const Error&) {
      throw Error(ErrorKind::InvalidArgument, "growth '" + head + "': bad parameter '" + arg + "'");
    }
  };
  if (head == "power") return GrowthFunction::power(number());
  if (head == "exproot") return GrowthFunction::exp_root(number());
  if (head == "exp" && arg.empty()) return GrowthFunction::pure_exp();
  throw Error(ErrorKind::InvalidArgument, "unknown growth spec '" + std::string(spec) +
                                              "' (expected power:<rho>, exproot:<alpha>, exp)");
}

}  // namespace dnev
