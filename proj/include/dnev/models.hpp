#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "dnev/error.hpp"
#include "dnev/ratfun.hpp"
#include "dnev/roots.hpp"

namespace dnev {

struct RationalFn {
  RatFun f;
  double log_lead = 0;  // log |lc(num) / lc(den)|
  std::vector<Root> zeros;
  std::vector<Root> poles;
};

struct ProductLevel {
  double r = 0;
  std::int64_t n = 0;
};

/// prod_k (1 - (z / r_k)^{n_k}).
struct CanonicalProduct {
  std::vector<ProductLevel> levels;
};

/// exp(p(z)); coefficients low to high.
struct ExpPoly {
  std::vector<cplx> p;
};

/// exp(exp(z)).
struct ExpExp {};

/// f(z + shift)^power for one of the base families.
struct Model {
  std::variant<RationalFn, CanonicalProduct, ExpPoly, ExpExp> base;
  cplx shift = 0;
  int power = 1;
  std::string name;
};

inline Model rational_model(const RatFun& f, std::string name = {}) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "the zero function has no characteristic");
  RationalFn r;
  r.f = f;
  r.log_lead = std::log(std::abs(to_double(f.num().leading()) / to_double(f.den().leading())));
  for (const auto& z : roots(f.num())) r.zeros.push_back(z);
  for (const auto& z : roots(f.den())) r.poles.push_back(z);
  return Model{r, 0, 1, name.empty() ? "rational:" + to_text(f) : name};
}

inline Model product_model(std::vector<ProductLevel> levels, std::string name = "product") {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k].r <= 0 || levels[k].n < 1) throw Error(ErrorKind::InvalidArgument, "bad product level");
    if (k > 0 && levels[k].r < 2 * levels[k - 1].r)
      throw Error(ErrorKind::InvalidArgument, "product radii must at least double");
  }
  return Model{CanonicalProduct{std::move(levels)}, 0, 1, std::move(name)};
}

inline Model exp_poly_model(std::vector<cplx> p, std::string name = "exp") {
  return Model{ExpPoly{std::move(p)}, 0, 1, std::move(name)};
}

inline Model exp_exp_model() { return Model{ExpExp{}, 0, 1, "expexp"}; }

inline Model shifted(Model m, cplx c) {
  m.shift += c;
  return m;
}

inline Model powered(Model m, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "power must be positive");
  m.power *= k;
  return m;
}

inline bool is_product(const Model& m) { return std::holds_alternative<CanonicalProduct>(m.base); }

namespace detail {

/// log|1 - rho e^{i alpha}|, accurate near rho e^{i alpha} = 1.
inline double log_abs_one_minus(double rho, double alpha) {
  if (rho < 0.5) return 0.5 * std::log1p(rho * rho - 2 * rho * std::cos(alpha));
  double s = std::sin(0.5 * alpha);
  return 0.5 * std::log((1 - rho) * (1 - rho) + 4 * rho * s * s);
}

/// log|1 - u^n| with u = zeta / r, stable for large n on both sides of |u| = 1.
inline double log_abs_level(cplx zeta, const ProductLevel& lv) {
  const double n = static_cast<double>(lv.n);
  const double L = n * (std::log(std::abs(zeta)) - std::log(lv.r));
  const double alpha = std::fmod(n * std::arg(zeta), 2 * std::numbers::pi);
  if (L > 0) {
    if (L > 745) return L;
    return L + log_abs_one_minus(std::exp(-L), -alpha);
  }
  if (L < -745) return 0;
  return log_abs_one_minus(std::exp(L), alpha);
}

}  // namespace detail

/// log|f(z)|; -inf at zeros and +inf at poles.
inline double log_abs(const Model& m, cplx z) {
  const cplx zeta = z + m.shift;
  double v = 0;
  if (auto* r = std::get_if<RationalFn>(&m.base)) {
    v = r->log_lead;
    for (const auto& q : r->zeros) v += q.multiplicity * std::log(std::abs(zeta - q.z));
    for (const auto& q : r->poles) v -= q.multiplicity * std::log(std::abs(zeta - q.z));
  } else if (auto* p = std::get_if<CanonicalProduct>(&m.base)) {
    for (const auto& lv : p->levels) v += detail::log_abs_level(zeta, lv);
  } else if (auto* e = std::get_if<ExpPoly>(&m.base)) {
    cplx acc = 0;
    for (auto it = e->p.rbegin(); it != e->p.rend(); ++it) acc = acc * zeta + *it;
    v = acc.real();
  } else {
    v = std::exp(zeta.real()) * std::cos(zeta.imag());
  }
  return m.power * v;
}

struct DivisorPoint {
  cplx z;
  int multiplicity;  // > 0 zero, < 0 pole
};

struct Divisor {
  std::vector<DivisorPoint> points;
};

/// Zeros and poles of the model with |z| <= radius.
inline Divisor zeros_poles(const Model& m, double radius) {
  if (!(radius > 0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  Divisor d;
  auto add = [&](cplx z, int mult) {
    z -= m.shift;
    if (std::abs(z) <= radius) d.points.push_back({z, mult * m.power});
  };
  if (auto* r = std::get_if<RationalFn>(&m.base)) {
    for (const auto& q : r->zeros) add(q.z, q.multiplicity);
    for (const auto& q : r->poles) add(q.z, -q.multiplicity);
  } else if (auto* p = std::get_if<CanonicalProduct>(&m.base)) {
    const double reach = radius + std::abs(m.shift);
    for (const auto& lv : p->levels) {
      if (lv.r > reach) continue;
      for (std::int64_t j = 0; j < lv.n; ++j)
        add(std::polar(lv.r, 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(lv.n)), 1);
    }
  }
  return d;
}

}  // namespace dnev
