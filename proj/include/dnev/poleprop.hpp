#pragma once

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "dnev/error.hpp"
#include "dnev/exact.hpp"
#include "dnev/profile.hpp"

namespace dnev {

/// Lower bounds on pole orders k_n at z_0 + n. Skipped entries mark blacklisted points;
/// the chain restarts from k0 right after each one.
struct PoleChain {
  BigInt k0 = 1;
  Rational ratio = Rational(3, 2);
  std::vector<Rational> bounds;
  std::vector<BigInt> ceilings;
  std::vector<bool> skipped;

  std::size_t size() const { return bounds.size(); }
};

inline constexpr std::size_t kMaxChainSteps = 100000;

inline BigInt ceil_rational(const Rational& q) {
  BigInt n = numer(q), d = denom(q);
  BigInt f = n / d;
  if (f * d != n && n > 0) f += 1;
  return f;
}

/// ratio defaults to 3/2; other values q/2 are experimental.
inline PoleChain chain(const BigInt& k0, std::size_t steps, const std::set<std::size_t>& blacklist = {},
                       const Rational& ratio = Rational(3, 2)) {
  if (k0 < 1) throw Error(ErrorKind::InvalidArgument, "k0 must be at least 1");
  if (ratio <= 1) throw Error(ErrorKind::InvalidArgument, "ratio must exceed 1");
  if (steps > kMaxChainSteps)
    throw Error(ErrorKind::Overflow, "chain of " + std::to_string(steps) + " steps exceeds the cap");
  PoleChain c;
  c.k0 = k0;
  c.ratio = ratio;
  bool anchor = true;
  for (std::size_t n = 0; n <= steps; ++n) {
    if (blacklist.count(n)) {
      c.bounds.emplace_back(0);
      c.ceilings.emplace_back(0);
      c.skipped.push_back(true);
      anchor = true;
      continue;
    }
    if (anchor) {
      c.bounds.emplace_back(k0);
      c.ceilings.push_back(k0);
      anchor = false;
    } else {
      c.bounds.push_back(c.bounds.back() * ratio);
      c.ceilings.push_back(ceil_rational(ratio * Rational(c.ceilings.back())));
    }
    c.skipped.push_back(false);
  }
  return c;
}

struct GrowthBound {
  double D = 1.5;
  double K = 0;
  double r0 = 1;
  /// Cumulative counting lower bound L(t_n) at t_n = r0 + n + 1.
  std::vector<double> counting;
};

/// Poles of order >= bounds[j] at z_0 + j with |z_0| <= r0 give
/// N(t) >= sum_{r0 + j <= t} bounds[j] log(t / (r0 + j)); K is the largest constant with
/// N(t_n) >= K D^{t_n} at every chain point.
inline GrowthBound growth_lower_bound(const PoleChain& c, double r0 = 1.0) {
  if (c.bounds.empty()) throw Error(ErrorKind::InvalidArgument, "empty chain");
  GrowthBound g;
  g.D = to_double(c.ratio);
  g.r0 = r0;
  g.K = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double t = r0 + static_cast<double>(n) + 1.0;
    double L = 0;
    for (std::size_t j = 0; j <= n; ++j) L += to_double(c.bounds[j]) * std::log(t / (r0 + static_cast<double>(j)));
    g.counting.push_back(L);
    if (!c.skipped[n]) g.K = std::min(g.K, L / std::pow(g.D, t));
  }
  return g;
}

/// Polynomial right-hand side of degree three: the chain forces exponential growth.
inline bool exclusion_flag(const DegreeProfile& p) {
  if (!p.benchmark_P)
    throw Error(ErrorKind::WrongBenchmark, "pole-chain exclusion is only established for the benchmark P");
  return p.deg_U == 0 && p.deg_Q == 3;
}

}  // namespace dnev
