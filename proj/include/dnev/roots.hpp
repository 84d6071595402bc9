#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dnev/error.hpp"
#include "dnev/ratfun.hpp"
#include "dnev/upoly.hpp"

namespace dnev {

using cplx = std::complex<double>;

struct Root {
  cplx z;
  int multiplicity = 1;
};

namespace detail {

inline std::vector<double> to_doubles(const QPoly& p) {
  std::vector<double> c;
  for (const auto& a : p.coeffs()) c.push_back(to_double(a));
  return c;
}

inline cplx horner(const std::vector<double>& c, cplx z) {
  cplx v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

inline cplx horner_d(const std::vector<double>& c, cplx z) {
  cplx v = 0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) v = v * z + c[k] * static_cast<double>(k);
  return v;
}

/// Simultaneous Aberth-Ehrlich iteration for a square-free polynomial.
inline std::vector<cplx> aberth(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  if (n == 1) return {cplx(-c[0] / c[1])};
  // Cauchy-type radius for the initial circle.
  double rad = 0;
  for (int k = 0; k < n; ++k) rad = std::max(rad, std::pow(std::abs(c[k] / c[n]), 1.0 / (n - k)));
  rad = std::max(rad, 1e-3);
  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(rad, 2 * std::numbers::pi * (k + 0.25) / n + 0.4);
  for (int it = 0; it < 1000; ++it) {
    double worst = 0;
    for (int k = 0; k < n; ++k) {
      cplx p = horner(c, z[k]);
      if (p == 0.0) continue;
      cplx ratio = p / horner_d(c, z[k]);
      cplx s = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      cplx step = ratio / (1.0 - ratio * s);
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (worst < 1e-15) return z;
  }
  for (int k = 0; k < n; ++k) {
    double scale = 0;
    for (int j = 0; j <= n; ++j) scale += std::abs(c[j]) * std::pow(std::abs(z[k]), j);
    if (std::abs(horner(c, z[k])) > 1e-9 * scale) throw Error(ErrorKind::RootIsolationFailure, "Aberth iteration stalled");
  }
  return z;
}

}  // namespace detail

/// Roots with multiplicities from the exact square-free decomposition.
inline std::vector<Root> roots(const QPoly& p) {
  std::vector<Root> out;
  if (p.degree() < 1) return out;
  const int z0 = p.low_order();
  if (z0 > 0) out.push_back({cplx(0), z0});
  auto parts = squarefree_decomposition(z0 > 0 ? divmod(p, QPoly::monomial(Rational(1), z0)).first : p);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].degree() < 1) continue;
    for (cplx z : detail::aberth(detail::to_doubles(parts[k]))) out.push_back({z, static_cast<int>(k) + 1});
  }
  return out;
}

}  // namespace dnev
