#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "dnev/diffpoly.hpp"
#include "dnev/eqparse.hpp"

namespace dnev {

/// Degree functionals of P alone.
struct PFunctionals {
  Exponent deg = 0;
  Exponent kappa_hat = 0;
  Exponent kappa = 0;
  Exponent lambda0_hat = 0;
  Exponent ord0 = 0;
  bool homogeneous = true;
  bool benchmark = false;
};

inline PFunctionals functionals(const DiffPolynomial& p) {
  PFunctionals f;
  f.deg = total_degree(p);
  f.kappa_hat = weight(p);
  f.kappa = kappa(p);
  f.lambda0_hat = deg0(p);
  f.ord0 = ord0(p);
  f.homogeneous = is_homogeneous(p);
  f.benchmark = is_benchmark(p);
  return f;
}

struct DegreeProfile {
  Exponent deg_P = 0;
  Exponent kappa_hat = 0;
  Exponent kappa = 0;
  Exponent lambda0_hat = 0;
  Exponent ord0_P = 0;
  Exponent deg_U = 0;
  Exponent deg_Q = 0;
  Exponent ord0_Q = 0;
  Exponent d_w = 0;
  Exponent D_w = 0;
  Exponent tau_w = 0;
  bool benchmark_P = false;
  /// Unflagged symbolic coefficients whose nonvanishing the extremal degrees rely on.
  std::vector<std::string> generic_assumptions;
};

inline DegreeProfile make_profile(const PFunctionals& f, Exponent deg_U, Exponent deg_Q, Exponent ord0_Q) {
  DegreeProfile p;
  p.deg_P = f.deg;
  p.kappa_hat = f.kappa_hat;
  p.kappa = f.kappa;
  p.lambda0_hat = f.lambda0_hat;
  p.ord0_P = f.ord0;
  p.benchmark_P = f.benchmark;
  p.deg_U = deg_U;
  p.deg_Q = deg_Q;
  p.ord0_Q = ord0_Q;
  p.d_w = std::max(deg_Q, f.deg + deg_U) - std::min(f.deg, ord0_Q);
  p.D_w = p.d_w - f.deg;
  p.tau_w = p.d_w - f.kappa_hat;
  return p;
}

namespace detail {

/// Name of the unique unflagged symbolic term attaining the extreme of `key`, if any.
template <class Key>
void note_extreme(const DiffPolynomial& p, Key key, bool want_max, std::set<std::string>& out) {
  if (p.empty()) return;
  Exponent best = key(p.terms().front());
  for (const auto& t : p.terms()) best = want_max ? std::max(best, key(t)) : std::min(best, key(t));
  const Term* hit = nullptr;
  int count = 0;
  for (const auto& t : p.terms())
    if (key(t) == best) {
      hit = &t;
      ++count;
    }
  if (count != 1) return;
  if (auto* s = std::get_if<SymbolicSmall>(&hit->coeff); s && !s->nonzero) out.insert(s->name);
}

}  // namespace detail

inline DegreeProfile degree_profile(const ClunieEquation& eq) {
  DegreeProfile p = make_profile(functionals(eq.P), w_degree(eq.U), w_degree(eq.Q), ord0(eq.Q));
  std::set<std::string> names;
  auto lam0 = [](const Term& t) { return t.exps[0]; };
  detail::note_extreme(eq.U, lam0, true, names);
  detail::note_extreme(eq.Q, lam0, true, names);
  detail::note_extreme(eq.Q, lam0, false, names);
  detail::note_extreme(eq.P, [](const Term& t) { return total(t.exps); }, true, names);
  detail::note_extreme(eq.P, lam0, true, names);
  detail::note_extreme(eq.P, lam0, false, names);
  for (std::size_t j = 1; j <= eq.P.num_shifts(); ++j)
    detail::note_extreme(eq.P, [j](const Term& t) { return t.exps[j]; }, true, names);
  p.generic_assumptions.assign(names.begin(), names.end());
  return p;
}

}  // namespace dnev
