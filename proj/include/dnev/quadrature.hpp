#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dnev/error.hpp"

namespace dnev {

struct QuadResult {
  double value = 0;
  double error = 0;
  std::size_t panels = 0;
  std::vector<double> partition;  // final panel endpoints, ascending
};

struct QuadOptions {
  double abs_tol = 1e-8;
  std::size_t initial_panels = 64;
  std::size_t max_panels = 4'000'000;
};

/// Largest admissible width for a panel [a, b]; +inf when unconstrained.
using WidthRule = std::function<double(double, double)>;

namespace detail {

struct Panel {
  double a, b, value, error;
};

template <class F>
Panel gk15(const F& f, double a, double b) {
  double err = 0;
  double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0, &err);
  // Boost leaves the estimate on the reference interval [-1, 1].
  return {a, b, v, err * 0.5 * (b - a)};
}

/// Pairwise summation over a range, in fixed order, for reproducible totals.
inline double pairwise(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise(x, h) + pairwise(x + h, n - h);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod over [lo, hi]. Panels start from a uniform split merged with
/// `breaks`, are cut until every panel satisfies `rule`, then the panel with the largest
/// error estimate is bisected until the summed estimate drops below abs_tol.
template <class F>
QuadResult integrate_adaptive(const F& f, double lo, double hi, std::vector<double> breaks, const WidthRule& rule,
                              const QuadOptions& opt = {}) {
  for (std::size_t k = 0; k <= opt.initial_panels; ++k)
    breaks.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(opt.initial_panels));
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> cuts;
  for (double x : breaks)
    if (x >= lo && x <= hi && (cuts.empty() || x - cuts.back() > 1e-15 * (hi - lo))) cuts.push_back(x);
  cuts.back() = hi;

  std::vector<std::pair<double, double>> seeds;
  std::vector<std::pair<double, double>> stack;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) stack.emplace_back(cuts[k], cuts[k + 1]);
  std::reverse(stack.begin(), stack.end());
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    double w = rule ? rule(a, b) : INFINITY;
    if (b - a > w && b - a > 1e-14) {
      double m = 0.5 * (a + b);
      stack.emplace_back(m, b);
      stack.emplace_back(a, m);
    } else {
      seeds.emplace_back(a, b);
    }
    if (seeds.size() + stack.size() > opt.max_panels)
      throw Error(ErrorKind::QuadratureNonConvergence, "panel budget exhausted while resolving oscillation");
  }

  std::vector<detail::Panel> panels;
  panels.reserve(seeds.size());
  double total_err = 0;
  for (auto [a, b] : seeds) {
    panels.push_back(detail::gk15(f, a, b));
    total_err += panels.back().error;
  }
  auto cmp = [&](std::size_t i, std::size_t j) { return panels[i].error < panels[j].error; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);
  std::size_t iter = 0;
  while (total_err > opt.abs_tol) {
    if (panels.size() >= opt.max_panels)
      throw Error(ErrorKind::QuadratureNonConvergence, "error estimate " + std::to_string(total_err) +
                                                           " above tolerance at the panel budget");
    std::size_t i = heap.top();
    heap.pop();
    detail::Panel p = panels[i];
    if (p.b - p.a < 1e-15 * (hi - lo)) {
      // Width at machine resolution: accept what the rule gives.
      panels[i].error = 0;
      total_err -= p.error;
      continue;
    }
    double m = 0.5 * (p.a + p.b);
    panels[i] = detail::gk15(f, p.a, m);
    panels.push_back(detail::gk15(f, m, p.b));
    total_err += panels[i].error + panels.back().error - p.error;
    heap.push(i);
    heap.push(panels.size() - 1);
    if (++iter % 4096 == 0) {
      total_err = 0;
      for (const auto& q : panels) total_err += q.error;
    }
  }
  std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  std::vector<double> vals, errs, part;
  vals.reserve(panels.size());
  errs.reserve(panels.size());
  part.reserve(panels.size() + 1);
  for (const auto& q : panels) {
    vals.push_back(q.value);
    errs.push_back(q.error);
    part.push_back(q.a);
  }
  part.push_back(hi);
  return {detail::pairwise(vals.data(), vals.size()), detail::pairwise(errs.data(), errs.size()), panels.size(),
          std::move(part)};
}

}  // namespace dnev
