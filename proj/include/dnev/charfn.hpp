#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dnev/error.hpp"
#include "dnev/growth.hpp"
#include "dnev/models.hpp"
#include "dnev/quadrature.hpp"

namespace dnev {

enum class Count { Poles, Zeros };

namespace detail {

inline double level_count(const ProductLevel& lv, double r) {
  return lv.r < r ? static_cast<double>(lv.n) * std::log(r / lv.r) : 0.0;
}

}  // namespace detail

/// sum_{0<|z_j|<=r} m_j log(r/|z_j|) + n(0) log r, straight from the divisor.
inline double counting_N(const Model& m, double r, Count which) {
  if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  if (auto* p = std::get_if<CanonicalProduct>(&m.base)) {
    if (which == Count::Poles) return 0;
    if (m.shift == 0.0) {
      double s = 0;
      for (const auto& lv : p->levels) s += detail::level_count(lv, r);
      return m.power * s;
    }
  }
  double s = 0;
  for (const auto& d : zeros_poles(m, r).points) {
    if ((which == Count::Poles) != (d.multiplicity < 0)) continue;
    double a = std::abs(d.z);
    double k = std::abs(static_cast<double>(d.multiplicity));
    s += k * std::log(r / (a > 0 ? a : 1.0));
  }
  return s;
}

struct MResult {
  double value = 0;
  double error = 0;
  double r = 0;  // radius actually used after any perturbation
  std::size_t panels = 0;
  std::vector<double> partition;  // angles of the final quadrature panels
};

namespace detail {

/// |r e^{i theta} + c| over theta in [a, b]: (min, max).
inline std::pair<double, double> modulus_range(double r, cplx c, double a, double b) {
  if (c == 0.0) return {r, r};
  const double rc = std::abs(c), gam = std::arg(c);
  auto mod = [&](double t) { return std::sqrt(std::max(0.0, r * r + rc * rc + 2 * r * rc * std::cos(t - gam))); };
  double lo = std::min(mod(a), mod(b)), hi = std::max(mod(a), mod(b));
  const double two_pi = 2 * std::numbers::pi;
  for (double target : {gam, gam + std::numbers::pi}) {
    double k = std::ceil((a - target) / two_pi);
    double t = target + k * two_pi;
    if (t <= b) {
      lo = std::min(lo, mod(t));
      hi = std::max(hi, mod(t));
    }
  }
  return {lo, hi};
}

/// Width rule resolving the oscillation of every product level whose zero ring the panel
/// approaches within a factor e^{40/n}.
inline WidthRule band_rule(const std::vector<const Model*>& models, double r) {
  struct Band {
    double lo, hi, n, rc;
    cplx c;
  };
  std::vector<Band> bands;
  for (const Model* m : models)
    if (auto* p = std::get_if<CanonicalProduct>(&m->base))
      for (const auto& lv : p->levels) {
        if (lv.n < 2) continue;
        double n = static_cast<double>(lv.n);
        bands.push_back({lv.r * std::exp(-40 / n), lv.r * std::exp(40 / n), n, std::abs(m->shift), m->shift});
      }
  if (bands.empty()) return {};
  return [bands, r](double a, double b) {
    double w = INFINITY;
    for (const auto& bd : bands) {
      auto [mn, mx] = modulus_range(r, bd.c, a, b);
      if (mx < bd.lo || mn > bd.hi) continue;
      double rate = r * (r + bd.rc) / std::max(mn * mn, 1e-300);
      w = std::min(w, std::numbers::pi / (bd.n * rate));
    }
    return w;
  };
}

/// Graded breakpoints toward divisor points lying within 0.1 r of the circle.
inline std::vector<double> proximity_breaks(const std::vector<cplx>& pts, double r) {
  std::vector<double> out;
  const double two_pi = 2 * std::numbers::pi;
  for (cplx p : pts) {
    double d = std::abs(std::abs(p) - r);
    if (d >= 0.1 * r) continue;
    double phi = std::arg(p);
    if (phi < 0) phi += two_pi;
    double h = std::max(d / r, 1e-9);
    out.push_back(phi);
    for (double s = h; s < 0.2; s *= 2)
      for (double t : {phi - s, phi + s}) out.push_back(t < 0 ? t + two_pi : (t > two_pi ? t - two_pi : t));
  }
  return out;
}

/// Divisor points of the rational parts, relevant to refinement and collision checks.
inline void rational_points(const Model& m, std::vector<cplx>& all, std::vector<cplx>* poles, bool zeros_are_poles) {
  auto* r = std::get_if<RationalFn>(&m.base);
  if (!r) return;
  for (const auto& q : r->zeros) {
    all.push_back(q.z - m.shift);
    if (poles && zeros_are_poles) poles->push_back(q.z - m.shift);
  }
  for (const auto& q : r->poles) {
    all.push_back(q.z - m.shift);
    if (poles && !zeros_are_poles) poles->push_back(q.z - m.shift);
  }
}

/// Zeros of the product levels closer to the circle than a quarter of their spacing.
inline void product_points(const Model& m, double r, std::vector<cplx>& all, std::vector<cplx>* poles) {
  auto* p = std::get_if<CanonicalProduct>(&m.base);
  if (!p) return;
  const double a = std::abs(m.shift);
  for (const auto& lv : p->levels) {
    const double n = static_cast<double>(lv.n);
    const double near = std::min(0.01 * r, 0.5 * std::numbers::pi * lv.r / n);
    if (lv.r - a > r + near || lv.r + a < r - near) continue;
    for (std::int64_t j = 0; j < lv.n; ++j) {
      cplx q = std::polar(lv.r, 2 * std::numbers::pi * static_cast<double>(j) / n) - m.shift;
      if (std::abs(std::abs(q) - r) >= near) continue;
      all.push_back(q);
      if (poles) poles->push_back(q);
    }
  }
}

inline bool collides(const std::vector<cplx>& poles, double r) {
  return std::any_of(poles.begin(), poles.end(), [r](cplx p) { return std::abs(std::abs(p) - r) <= 1e-12 * r; });
}

/// (1/2pi) int log+ g(r e^{i theta}) d theta with g given in logarithmic form.
template <class LogG>
MResult circle_logplus(const LogG& log_g, double r, const std::vector<const Model*>& models,
                       const std::vector<cplx>& points, const std::vector<cplx>& poles, double tol_scale) {
  for (int attempt = 0; collides(poles, r); ++attempt) {
    if (attempt == 3) throw Error(ErrorKind::PoleOnCircle, "pole on |z| = " + std::to_string(r));
    r *= 1 + 1e-9;
  }
  auto f = [&](double t) {
    double v = log_g(std::polar(r, t));
    return v > 0 ? v : 0.0;
  };
  QuadOptions opt;
  opt.abs_tol = 2 * std::numbers::pi * 1e-8 * std::max(1.0, tol_scale);
  auto breaks = proximity_breaks(points, r);
  // Kinks of log+ where log g changes sign, located on a coarse scan and bisected.
  const int scan = 1024;
  const double step = 2 * std::numbers::pi / scan;
  auto g = [&](double t) { return log_g(std::polar(r, t)); };
  double t0 = 0, g0 = g(0);
  for (int k = 1; k <= scan; ++k) {
    double t1 = k * step, g1 = g(t1);
    if (std::isfinite(g0) && std::isfinite(g1) && (g0 > 0) != (g1 > 0)) {
      double a = t0, b = t1;
      bool pa = g0 > 0;
      for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
        double mid = 0.5 * (a + b);
        ((g(mid) > 0) == pa ? a : b) = mid;
      }
      breaks.push_back(0.5 * (a + b));
    }
    t0 = t1;
    g0 = g1;
  }
  auto q = integrate_adaptive(f, 0.0, 2 * std::numbers::pi, std::move(breaks), band_rule(models, r), opt);
  if (q.error > opt.abs_tol * 10)
    throw Error(ErrorKind::QuadratureNonConvergence, "error estimate above tolerance");
  const double norm = 1 / (2 * std::numbers::pi);
  return {q.value * norm, q.error * norm, r, q.panels, std::move(q.partition)};
}

/// Crude magnitude of log|f| on the circle, used to scale the absolute tolerance.
inline double log_scale(const Model& m, double r) {
  double s = 0;
  for (int k = 0; k < 16; ++k) {
    double v = log_abs(m, std::polar(r, 2 * std::numbers::pi * (k + 0.5) / 16));
    if (std::isfinite(v)) s = std::max(s, std::abs(v));
  }
  return s;
}

}  // namespace detail

inline MResult proximity_m(const Model& m, double r) {
  if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  std::vector<cplx> pts, poles;
  detail::rational_points(m, pts, &poles, false);
  return detail::circle_logplus([&](cplx z) { return log_abs(m, z); }, r, {&m}, pts, poles,
                                detail::log_scale(m, r));
}

/// m(r, f(z+c)/f(z)) with both logarithms evaluated at the same node.
inline MResult log_diff_m(const Model& m, cplx c, double r) {
  if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  if (c == 0.0) return {0, 0, r, 0, {}};
  Model mc = shifted(m, c);
  std::vector<cplx> pts, poles;
  detail::rational_points(m, pts, &poles, true);
  detail::rational_points(mc, pts, &poles, false);
  detail::product_points(m, r, pts, &poles);
  detail::product_points(mc, r, pts, nullptr);
  return detail::circle_logplus(
      [&](cplx z) {
        double a = log_abs(mc, z), b = log_abs(m, z);
        if (std::isinf(a) && std::isinf(b)) return 0.0;
        return a - b;
      },
      r, {&m, &mc}, pts, poles, std::max(detail::log_scale(m, r), detail::log_scale(mc, r)));
}

struct CharacteristicSample {
  double r = 0;
  double m = 0;
  double N = 0;
  double T = 0;
  double quadrature_error_estimate = 0;
};

inline CharacteristicSample characteristic_T(const Model& model, double r) {
  MResult mr = proximity_m(model, r);
  CharacteristicSample s;
  s.r = mr.r;
  s.m = mr.value;
  s.N = counting_N(model, mr.r, Count::Poles);
  s.T = s.m + s.N;
  s.quadrature_error_estimate = mr.error;
  return s;
}

// ---- shift inequalities ---------------------------------------------------------------------

struct ShiftConstants {
  double r0 = 0;
  double C_N = 0;
  double C_T = 0;
};

struct ShiftCheck {
  double r = 0;
  double lhs_N = 0, main_N = 0, rhs_N = 0;
  double lhs_T = 0, main_T = 0, rhs_T = 0;
  double tol_T = 0;
  bool pass_N = false, pass_T = false;
  /// Share of the additive constant used: (lhs - main) / C, clipped below at 0.
  double slack_used_N = 0, slack_used_T = 0;
  bool pass() const { return pass_N && pass_T; }
};

namespace detail {

inline double factor_N(double r, double c) {
  if (c == 0) return 1;
  return 1 + c / r + (1 + c) * std::log1p(c) / std::log(r + c);
}

inline double factor_T(double r, double c) {
  if (c == 0) return 1;
  return 1 + (2 + c) * std::log1p(c) / std::log(r + c);
}

}  // namespace detail

/// The O(1) terms, measured at r0 = 1 + 2|c| and padded by log 2.
inline ShiftConstants shift_constants(const Model& f, cplx c) {
  const double a = std::abs(c);
  ShiftConstants k;
  k.r0 = 1 + 2 * a;
  Model fc = shifted(f, c);
  double lhsN = counting_N(fc, k.r0, Count::Poles);
  double mainN = detail::factor_N(k.r0, a) * counting_N(f, k.r0 + a, Count::Poles);
  k.C_N = std::max(counting_N(f, 1.0, Count::Poles), std::max(0.0, lhsN - mainN)) + std::log(2.0);
  auto lt = characteristic_T(fc, k.r0);
  auto rt = characteristic_T(f, k.r0 + a);
  k.C_T = std::max(0.0, lt.T - detail::factor_T(k.r0, a) * rt.T) + lt.quadrature_error_estimate +
          rt.quadrature_error_estimate + std::log(2.0);
  return k;
}

inline ShiftCheck shift_inequality_check(const Model& f, cplx c, double r, const ShiftConstants& k) {
  const double a = std::abs(c);
  if (!(r > 1 + a)) throw Error(ErrorKind::InvalidArgument, "need r > 1 + |c|");
  Model fc = shifted(f, c);
  ShiftCheck s;
  s.r = r;
  s.lhs_N = counting_N(fc, r, Count::Poles);
  s.main_N = detail::factor_N(r, a) * counting_N(f, r + a, Count::Poles);
  s.rhs_N = s.main_N + k.C_N;
  s.pass_N = s.lhs_N <= s.rhs_N * (1 + 1e-12);
  auto lt = characteristic_T(fc, r);
  auto rt = characteristic_T(f, r + a);
  s.lhs_T = lt.T;
  s.main_T = detail::factor_T(r, a) * rt.T;
  s.rhs_T = s.main_T + k.C_T;
  s.tol_T = lt.quadrature_error_estimate + rt.quadrature_error_estimate;
  s.pass_T = s.lhs_T <= s.rhs_T + s.tol_T;
  s.slack_used_N = std::max(0.0, s.lhs_N - s.main_N) / k.C_N;
  s.slack_used_T = std::max(0.0, s.lhs_T - s.main_T) / k.C_T;
  return s;
}

inline ShiftCheck shift_inequality_check(const Model& f, cplx c, double r) {
  return shift_inequality_check(f, c, r, shift_constants(f, c));
}

// ---- logarithmic difference -----------------------------------------------------------------

struct LogDiffReport {
  std::vector<ScanRow> rows;
  ExceptionSet set;
  DensityReport density;
  bool negative_control = false;  // hypothesis known to fail; scan is diagnostic only
  std::size_t guarded = 0;  // points with T(r) <= e
};

inline double logdiff_rhs(double T, double r, double c_abs, double delta, double eps) {
  double L = std::log(T);
  return 436 * std::numbers::e * (1 + c_abs) * std::pow(std::pow(std::log(L), 1 + eps) * L / r, delta) * T;
}

inline LogDiffReport verify_logdiff_bound(const Model& f, cplx c, double delta, double eps, double r_lo, double r_hi,
                                          double ratio = 1.01) {
  if (!(delta > 0 && delta < 0.5)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1/2)");
  LogDiffReport rep;
  rep.negative_control = std::holds_alternative<ExpExp>(f.base);
  for (double r : geometric_grid(r_lo, r_hi, ratio)) {
    auto t = characteristic_T(f, r);
    if (!(t.T > std::numbers::e)) {
      ++rep.guarded;
      rep.rows.push_back({r, 0, 0, true, true});
      continue;
    }
    auto m = log_diff_m(f, c, r);
    double rhs = logdiff_rhs(t.T, r, std::abs(c), delta, eps);
    rep.rows.push_back({r, m.value, rhs, m.value <= rhs + m.error, false});
  }
  rep.set = exception_cells(rep.rows, r_hi);
  rep.density = densities(rep.set);
  return rep;
}

// ---- the counterexample product -----------------------------------------------------------------

struct ExampleLevel {
  int k = 0;
  double r = 0;
  std::int64_t n = 0;
  long double threshold = 0;  // 4 r_k (log r_k)^2 sum_{j<k} n_j
};

struct ExampleProduct {
  Model model;
  std::vector<ExampleLevel> certificate;
};

/// r_1 = 8, r_{k+1} = 2 r_k, n_k the least integer above 4 r_k (log r_k)^2 sum_{j<k} n_j.
inline ExampleProduct build_example_product(int s_max, std::int64_t n1 = 1, std::int64_t cap = 10'000'000) {
  if (s_max < 1) throw Error(ErrorKind::InvalidArgument, "need at least one level");
  if (n1 < 1) throw Error(ErrorKind::InvalidArgument, "n1 must be positive");
  ExampleProduct ex;
  std::vector<ProductLevel> levels;
  long double sum = 0;
  double r = 8;
  for (int k = 1; k <= s_max; ++k, r *= 2) {
    ExampleLevel lv;
    lv.k = k;
    lv.r = r;
    if (k == 1) {
      lv.n = n1;
    } else {
      long double lr = std::log(static_cast<long double>(r));
      lv.threshold = 4.0L * r * lr * lr * sum;
      long double next = std::floor(lv.threshold) + 1;
      if (next > static_cast<long double>(cap))
        throw Error(ErrorKind::Overflow, "n_" + std::to_string(k) + " exceeds the cap " + std::to_string(cap));
      lv.n = static_cast<std::int64_t>(next);
    }
    sum += static_cast<long double>(lv.n);
    ex.certificate.push_back(lv);
    levels.push_back({r, lv.n});
  }
  ex.model = product_model(std::move(levels), "product:s=" + std::to_string(s_max) + ",n1=" + std::to_string(n1));
  return ex;
}

/// Levels with r_k <= 4 * horizon, plus the tail bound sum (horizon / r_k)^{n_k} of the rest.
inline std::pair<Model, double> truncate_product(const Model& m, double horizon) {
  auto* p = std::get_if<CanonicalProduct>(&m.base);
  if (!p) return {m, 0.0};
  Model out = m;
  auto& lv = std::get<CanonicalProduct>(out.base).levels;
  lv.clear();
  double tail = 0;
  for (const auto& l : p->levels) {
    if (l.r <= 4 * horizon) lv.push_back(l);
    else tail += std::pow(horizon / l.r, static_cast<double>(l.n));
  }
  return {out, tail};
}

struct ExampleRow {
  double r = 0;
  double T_f = 0;
  double T_fc = 0;
  double m_ratio = 0;  // m(r, f_c / f)
  double err = 0;
  double ratio_m = 0;  // m(r, f_c / f) / T(r, f_c)
  double ratio_T = 0;  // T(r, f) / T(r, f_c)
};

/// Ten radii r_s - 1/2 + k/20, k = 0..9, in the window just below the zero ring |z| = r_s.
inline std::vector<double> example_window(int s) {
  const double rs = 8 * std::pow(2.0, s - 1);
  std::vector<double> out;
  for (int k = 0; k < 10; ++k) out.push_back(rs - 0.5 + 0.05 * k);
  return out;
}

inline std::vector<ExampleRow> example_product_report(const Model& model, int s, cplx c = 3.0) {
  std::vector<ExampleRow> rows;
  for (double r : example_window(s)) {
    auto [m, tail] = truncate_product(model, r + std::abs(c));
    auto tf = characteristic_T(m, r);
    auto tfc = characteristic_T(shifted(m, c), r);
    auto q = log_diff_m(m, c, r);
    ExampleRow row;
    row.r = r;
    row.T_f = tf.T;
    row.T_fc = tfc.T;
    row.m_ratio = q.value;
    row.err = tf.quadrature_error_estimate + tfc.quadrature_error_estimate + q.error + tail;
    row.ratio_m = q.value / tfc.T;
    row.ratio_T = tf.T / tfc.T;
    rows.push_back(row);
  }
  return rows;
}

// ---- finite-order shift identity -------------------------------------------------------------------

struct ResidualFit {
  bool identically_zero = false;
  double exponent = 0;  // slope of log residual against log r
  double intercept = 0;
  std::size_t points = 0;
};

/// Least-squares fit of log(N(r+|c|) - N(r)) against log r on a geometric grid.
inline ResidualFit shift_identity_finite_order(const Model& m, cplx c, double r_lo, double r_hi,
                                               Count which = Count::Poles, double ratio = 1.1) {
  const double a = std::abs(c);
  std::vector<double> xs, ys;
  bool all_zero = true;
  for (double r : geometric_grid(r_lo, r_hi, ratio)) {
    double res = counting_N(m, r + a, which) - counting_N(m, r, which);
    if (res > 1e-300) {
      all_zero = false;
      xs.push_back(std::log(r));
      ys.push_back(std::log(res));
    }
  }
  ResidualFit fit;
  fit.identically_zero = all_zero;
  fit.points = xs.size();
  if (xs.size() < 2) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxx += (xs[i] - mx) * (xs[i] - mx), sxy += (xs[i] - mx) * (ys[i] - my);
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  return fit;
}

/// R(z, f(z)) for R = A(w)/B(w) with coefficients in Q(z) and rational f.
inline RatFun substitute(const UPoly<RatFun>& A, const UPoly<RatFun>& B, const RatFun& f) {
  auto horner = [&](const UPoly<RatFun>& p) {
    RatFun acc(0);
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * f + *it;
    return acc;
  };
  RatFun den = horner(B);
  if (den.is_zero()) throw Error(ErrorKind::InvalidArgument, "denominator vanishes identically after substitution");
  return horner(A) / den;
}

}  // namespace dnev
