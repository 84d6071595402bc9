#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dnev/error.hpp"

namespace dnev {

/// Growth data T(r) on [1, inf), handled through log T so that e^r stays finite.
class GrowthFunction {
 public:
  enum class Kind { Power, ExpRoot, PureExp, Max, Sum, Sampled, Custom };

  static GrowthFunction power(double rho) {
    if (!(rho > 0)) throw Error(ErrorKind::InvalidArgument, "power needs rho > 0");
    return GrowthFunction(Kind::Power, "r^" + num(rho), [rho](double r) { return rho * std::log(r); });
  }
  /// beta * exp(r^alpha)
  static GrowthFunction exp_root(double alpha, double beta = 1.0) {
    if (!(alpha > 0) || !(beta > 0)) throw Error(ErrorKind::InvalidArgument, "exp_root needs alpha, beta > 0");
    double lb = std::log(beta);
    return GrowthFunction(Kind::ExpRoot, "exp(r^" + num(alpha) + ")",
                          [alpha, lb](double r) { return lb + std::pow(r, alpha); });
  }
  static GrowthFunction pure_exp() {
    return GrowthFunction(Kind::PureExp, "exp(r)", [](double r) { return r; });
  }
  static GrowthFunction max_of(const GrowthFunction& a, const GrowthFunction& b) {
    return GrowthFunction(Kind::Max, "max(" + a.name_ + "," + b.name_ + ")",
                          [a, b](double r) { return std::max(a.log_T(r), b.log_T(r)); });
  }
  static GrowthFunction sum_of(const GrowthFunction& a, const GrowthFunction& b) {
    return GrowthFunction(Kind::Sum, a.name_ + "+" + b.name_, [a, b](double r) {
      double x = a.log_T(r), y = b.log_T(r);
      double m = std::max(x, y);
      return m + std::log(std::exp(x - m) + std::exp(y - m));
    });
  }
  /// log T from a caller-supplied closure, for forms outside the analytic catalogue.
  static GrowthFunction custom(std::string name, std::function<double(double)> log_t) {
    return GrowthFunction(Kind::Custom, std::move(name), std::move(log_t));
  }
  /// Samples on an increasing grid; repaired to a non-decreasing envelope, then required
  /// to be convex in log r. Interpolation is linear in (log r, log T).
  static GrowthFunction sampled(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size())
      throw Error(ErrorKind::InvalidArgument, "sampled growth needs matching grids of length >= 2");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(values[i] > 0)) throw Error(ErrorKind::InvalidArgument, "sampled values must be positive");
      if (i && !(grid[i] > grid[i - 1])) throw Error(ErrorKind::InvalidArgument, "grid must increase");
    }
    for (std::size_t i = 1; i < values.size(); ++i)
      if (values[i] < values[i - 1]) {
        if (values[i - 1] - values[i] > 1e-9 * values[i - 1])
          throw Error(ErrorKind::HypothesisViolation, "samples decrease beyond repair tolerance at r = " +
                                                          num(grid[i]));
        values[i] = values[i - 1];
      }
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
      double s0 = (values[i] - values[i - 1]) / (std::log(grid[i]) - std::log(grid[i - 1]));
      double s1 = (values[i + 1] - values[i]) / (std::log(grid[i + 1]) - std::log(grid[i]));
      if (s1 < s0 - 1e-9 * std::max({1.0, std::abs(s0), std::abs(s1)}))
        throw Error(ErrorKind::NotLogConvex, "samples are not convex in log r near r = " + num(grid[i]));
    }
    auto g = std::make_shared<std::vector<double>>(std::move(grid));
    auto v = std::make_shared<std::vector<double>>();
    for (double x : values) v->push_back(std::log(x));
    return GrowthFunction(Kind::Sampled, "sampled", [g, v](double r) {
      const auto& x = *g;
      std::size_t i = std::upper_bound(x.begin(), x.end(), r) - x.begin();
      i = std::clamp<std::size_t>(i, 1, x.size() - 1);
      double t = (std::log(r) - std::log(x[i - 1])) / (std::log(x[i]) - std::log(x[i - 1]));
      return (*v)[i - 1] + t * ((*v)[i] - (*v)[i - 1]);
    });
  }

  double log_T(double r) const { return log_t_(r); }
  double T(double r) const { return std::exp(log_t_(r)); }
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  GrowthFunction(Kind k, std::string name, std::function<double(double)> f)
      : kind_(k), name_(std::move(name)), log_t_(std::move(f)) {}
  static std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  Kind kind_;
  std::string name_;
  std::function<double(double)> log_t_;
};

// ---- exception sets -------------------------------------------------------------------

struct ExceptionSet {
  std::vector<std::pair<double, double>> intervals;
  double horizon = 1;

  void add(double a, double b) {
    a = std::max(a, 1.0);
    b = std::min(b, horizon);
    if (!(b >= a)) return;
    if (!intervals.empty() && a <= intervals.back().second) {
      intervals.back().second = std::max(intervals.back().second, b);
      return;
    }
    intervals.emplace_back(a, b);
  }
};

struct DensityReport {
  double lower_density = 0;
  double upper_density = 0;
  double linear_measure = 0;
  double log_measure = 0;
};

inline double linear_measure(const ExceptionSet& e) {
  double s = 0;
  for (auto [a, b] : e.intervals) s += b - a;
  return s;
}

inline double log_measure(const ExceptionSet& e) {
  double s = 0;
  for (auto [a, b] : e.intervals) s += std::log(b / a);
  return s;
}

/// |E n [1, t]| / (t - 1) is monotone between interval endpoints, so its extremes over the
/// window [window_start, R] are attained at those endpoints. Default window: [sqrt(R), R].
inline DensityReport densities(const ExceptionSet& e, std::optional<double> window_start = std::nullopt) {
  DensityReport d;
  d.linear_measure = linear_measure(e);
  d.log_measure = log_measure(e);
  const double R = e.horizon;
  double w0 = window_start.value_or(std::sqrt(R));
  w0 = std::clamp(w0, std::min(R, 1.0 + 1e-9), R);
  if (!(R > 1)) return d;
  std::vector<double> pts{w0, R};
  for (auto [a, b] : e.intervals) {
    if (a > w0 && a < R) pts.push_back(a);
    if (b > w0 && b < R) pts.push_back(b);
  }
  auto measure_to = [&](double t) {
    double s = 0;
    for (auto [a, b] : e.intervals) {
      if (a >= t) break;
      s += std::min(b, t) - a;
    }
    return s;
  };
  d.lower_density = std::numeric_limits<double>::infinity();
  d.upper_density = 0;
  for (double t : pts) {
    if (!(t > 1)) continue;
    double f = measure_to(t) / (t - 1);
    d.lower_density = std::min(d.lower_density, f);
    d.upper_density = std::max(d.upper_density, f);
  }
  if (!std::isfinite(d.lower_density)) d.lower_density = 0;
  d.lower_density = std::clamp(d.lower_density, 0.0, 1.0);
  d.upper_density = std::clamp(d.upper_density, 0.0, 1.0);
  return d;
}

/// Geometric grid lo, lo*ratio, ... up to and including hi.
inline std::vector<double> geometric_grid(double lo, double hi, double ratio) {
  if (!(ratio > 1)) throw Error(ErrorKind::InvalidArgument, "grid ratio must exceed 1");
  if (!(hi >= lo) || !(lo > 0)) throw Error(ErrorKind::InvalidArgument, "bad grid range");
  std::vector<double> g;
  for (std::size_t k = 0;; ++k) {
    double r = lo * std::pow(ratio, static_cast<double>(k));
    if (r >= hi * (1 - 1e-12)) break;
    g.push_back(r);
  }
  g.push_back(hi);
  return g;
}

struct ScanRow {
  double r = 0;
  double lhs = 0;
  double rhs = 0;
  bool pass = true;
  bool skipped = false;
};

/// Each failing grid point r_i contributes the cell [r_i, r_{i+1}].
inline ExceptionSet exception_cells(const std::vector<ScanRow>& rows, double horizon) {
  ExceptionSet e;
  e.horizon = horizon;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].skipped && !rows[i].pass) e.add(rows[i].r, i + 1 < rows.size() ? rows[i + 1].r : rows[i].r);
  return e;
}

// ---- phi ---------------------------------------------------------------------------------

/// Running maximum of t / max{1, log T(t)} on [1, R]. The kinks where log T(t) = 1 are
/// inserted into the sampling grid.
class PhiTable {
 public:
  PhiTable(const GrowthFunction& T, double R, double ratio = 1.001) : T_(T) {
    if (!(R >= 1)) throw Error(ErrorKind::InvalidArgument, "phi needs r >= 1");
    std::vector<double> g = geometric_grid(1.0, std::max(R, 1.0 + 1e-12), ratio);
    std::vector<double> pts;
    for (std::size_t i = 0; i < g.size(); ++i) {
      pts.push_back(g[i]);
      if (i + 1 < g.size()) {
        double a = g[i], b = g[i + 1];
        double fa = T.log_T(a) - 1, fb = T.log_T(b) - 1;
        if ((fa < 0) != (fb < 0)) {
          for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (a + b);
            if ((T.log_T(m) - 1 < 0) == (fa < 0)) a = m;
            else b = m;
          }
          pts.push_back(fa < 0 ? a : b);
          pts.push_back(fa < 0 ? b : a);
        }
      }
    }
    std::sort(pts.begin(), pts.end());
    double best = 0;
    for (double t : pts) {
      best = std::max(best, g_of(t));
      t_.push_back(t);
      run_.push_back(best);
    }
  }

  double operator()(double r) const {
    if (r < 1) throw Error(ErrorKind::InvalidArgument, "phi needs r >= 1");
    std::size_t i = std::upper_bound(t_.begin(), t_.end(), r) - t_.begin();
    double best = i ? run_[i - 1] : 0;
    return std::max(best, g_of(r));
  }

 private:
  double g_of(double t) const { return t / std::max(1.0, T_.log_T(t)); }

  GrowthFunction T_;
  std::vector<double> t_;
  std::vector<double> run_;
};

inline double phi(const GrowthFunction& T, double r) { return PhiTable(T, r)(r); }

inline double phi_eps(const GrowthFunction& T, double eps, double r) {
  double L = T.log_T(r);
  if (!(L > 1)) throw Error(ErrorKind::TooSmall, "T(r) <= e");
  return r / (std::pow(std::log(L), 1 + eps) * L);
}

// ---- step scans ------------------------------------------------------------------------------

struct StepReport {
  std::vector<ScanRow> rows;
  ExceptionSet set;
  DensityReport density;
  /// log T(r)/r halves between sqrt(R) and R and phi at least doubles.
  bool hypothesis_ok = false;
  bool certified = false;
};

/// T(r + phi^delta) <= T(r) + 4 phi^{delta - 1/2} T(r), compared in logarithms.
inline StepReport scan_step(const GrowthFunction& T, double delta, double R, double ratio = 1.01,
                                  double threshold = 0.05) {
  if (!(delta > 0 && delta < 0.5)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1/2)");
  StepReport rep;
  PhiTable ph(T, R);
  for (double r : geometric_grid(1.0, R, ratio)) {
    double p = ph(r);
    double lhs = T.log_T(r + std::pow(p, delta)) - T.log_T(r);
    double rhs = std::log1p(4 * std::pow(p, delta - 0.5));
    rep.rows.push_back({r, lhs, rhs, lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)), false});
  }
  rep.set = exception_cells(rep.rows, R);
  rep.density = densities(rep.set);
  const double a = std::sqrt(R);
  const double qa = T.log_T(a) / a, qR = T.log_T(R) / R;
  rep.hypothesis_ok = qR <= 0.5 * qa && ph(R) >= 2 * ph(a);
  rep.certified = rep.hypothesis_ok && rep.density.lower_density <= threshold;
  return rep;
}

struct EpsStepReport {
  std::vector<ScanRow> rows_small;  // T(r + phi_eps^delta) <= (1 + 4e phi_eps^{delta-1}) T(r)
  std::vector<ScanRow> rows_phi;  // T(r + phi_eps) <= e T(r)
  std::vector<ScanRow> rows_finite;  // T(r + h) <= (1 + 4hK/r) T(r), when requested
  ExceptionSet set_small, set_phi, set_finite;
  DensityReport density_small, density_phi, density_finite;
  std::size_t guarded = 0;
};

inline EpsStepReport scan_eps_steps(const GrowthFunction& T, double delta, double eps, double R, double ratio = 1.01,
                                  std::optional<std::pair<double, double>> finite_hK = std::nullopt) {
  if (!(delta > 0 && delta < 1)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  EpsStepReport rep;
  const double floor_phi = std::pow(2.0, 1.0 / (1.0 - delta));
  for (double r : geometric_grid(1.0, R, ratio)) {
    double L = T.log_T(r);
    bool skip = !(L > 1);
    double pe = skip ? 0 : phi_eps(T, eps, r);
    if (!skip && !(pe > floor_phi && pe < r)) skip = true;
    if (skip) {
      ++rep.guarded;
      rep.rows_small.push_back({r, 0, 0, true, true});
      rep.rows_phi.push_back({r, 0, 0, true, true});
    } else {
      double l_small = T.log_T(r + std::pow(pe, delta)) - L;
      double r_small = std::log1p(4 * std::numbers::e * std::pow(pe, delta - 1));
      rep.rows_small.push_back({r, l_small, r_small, l_small <= r_small + 1e-12, false});
      double l_phi = T.log_T(r + pe) - L;
      rep.rows_phi.push_back({r, l_phi, 1.0, l_phi <= 1.0 + 1e-12, false});
    }
    if (finite_hK) {
      auto [h, K] = *finite_hK;
      double lf = T.log_T(r + h) - L;
      double rf = std::log1p(4 * h * K / r);
      rep.rows_finite.push_back({r, lf, rf, lf <= rf + 1e-12, false});
    }
  }
  rep.set_small = exception_cells(rep.rows_small, R);
  rep.set_phi = exception_cells(rep.rows_phi, R);
  rep.set_finite = exception_cells(rep.rows_finite, R);
  rep.density_small = densities(rep.set_small);
  rep.density_phi = densities(rep.set_phi);
  rep.density_finite = densities(rep.set_finite);
  return rep;
}

// ---- Edrei-Fuchs -----------------------------------------------------------------------------

struct EdreiFuchsResult {
  double measured = 0;
  double bound = 0;
  ExceptionSet set;
};

/// E = {r : psi(r + varphi(psi(r))) >= psi(r) + 1} measured on [a, A] by a linear grid whose
/// membership changes are located by bisection; bound = int_{psi(a)-1}^{psi(A)} varphi.
inline EdreiFuchsResult edrei_fuchs_bound(const std::function<double(double)>& psi,
                                          const std::function<double(double)>& varphi, double a, double A,
                                          std::size_t n = 20000) {
  if (!(A > a)) throw Error(ErrorKind::InvalidArgument, "need a < A");
  auto in_E = [&](double r) {
    double p = psi(r);
    return psi(r + varphi(p)) >= p + 1;
  };
  const double h = (A - a) / static_cast<double>(n);
  std::vector<double> xs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) xs[i] = i == n ? A : a + h * static_cast<double>(i);
  for (std::size_t i = 1; i <= n; ++i) {
    double p0 = psi(xs[i - 1]), p1 = psi(xs[i]);
    if (p1 < p0 - 1e-12 * std::max(1.0, std::abs(p0)))
      throw Error(ErrorKind::HypothesisViolation, "psi decreases near r = " + std::to_string(xs[i]));
  }
  const double lo = psi(a) - 1, hi = psi(A);
  {
    const double step = (hi - lo) / static_cast<double>(n);
    double prev = varphi(lo);
    for (std::size_t i = 1; i <= n; ++i) {
      double cur = varphi(lo + step * static_cast<double>(i));
      if (cur > prev + 1e-12 * std::max(1.0, std::abs(prev)))
        throw Error(ErrorKind::HypothesisViolation, "varphi increases on the integration range");
      prev = cur;
    }
  }
  EdreiFuchsResult res;
  res.set.horizon = A;
  auto edge = [&](double x0, double x1, bool inside_left) {
    for (int it = 0; it < 60; ++it) {
      double m = 0.5 * (x0 + x1);
      if (in_E(m) == inside_left) x0 = m;
      else x1 = m;
    }
    return 0.5 * (x0 + x1);
  };
  bool cur = in_E(xs[0]);
  double start = xs[0];
  for (std::size_t i = 1; i <= n; ++i) {
    bool next = in_E(xs[i]);
    if (next != cur) {
      double x = edge(xs[i - 1], xs[i], cur);
      if (cur) res.set.intervals.emplace_back(start, x);
      start = x;
      cur = next;
    }
  }
  if (cur) res.set.intervals.emplace_back(start, A);
  res.measured = linear_measure(res.set);
  if (hi > lo)
    res.bound = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(varphi, lo, hi, 30, 1e-12);
  return res;
}

// ---- shift ratio -------------------------------------------------------------------------------

struct ShiftRatioReport {
  double min_ratio = 0;
  double max_ratio = 0;
  bool holds = false;  // min ratio >= d
  bool boundary = false;  // min ratio equals d to 1e-9
};

/// N(dr)/N(r) on a geometric grid over [r_lo, r_hi].
inline ShiftRatioReport scan_shift_ratio(const GrowthFunction& N, double d, double r_lo = 2, double r_hi = 1e4,
                                         double ratio = 1.05) {
  if (!(d > 1)) throw Error(ErrorKind::InvalidArgument, "d must exceed 1");
  ShiftRatioReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (double r : geometric_grid(r_lo, r_hi, ratio)) {
    double q = std::exp(N.log_T(d * r) - N.log_T(r));
    rep.min_ratio = std::min(rep.min_ratio, q);
    rep.max_ratio = std::max(rep.max_ratio, q);
  }
  rep.boundary = std::abs(rep.min_ratio - d) <= 1e-9 * d;
  rep.holds = rep.min_ratio >= d * (1 - 1e-9);
  return rep;
}

}  // namespace dnev
