#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "dnev/exact.hpp"
#include "dnev/ratfun.hpp"

namespace dnev {

/// A shift c_j in w(z + c_j). Index is 1-based inside the owning polynomial.
struct Shift {
  ExactComplex value;
  int index = 1;

  friend bool operator==(const Shift&, const Shift&) = default;
};

using Exponent = std::int64_t;

/// (lambda_0, lambda_1, ..., lambda_n): lambda_0 is the power of w(z).
using MultiIndex = std::vector<Exponent>;

inline Exponent total(const MultiIndex& m) { return std::accumulate(m.begin(), m.end(), Exponent{0}); }

/// Symbolic small function a_k. `nonzero` marks a required side condition "a_k != 0";
/// `scale` absorbs a sign from the surrounding expression.
struct SymbolicSmall {
  std::string name;
  bool nonzero = false;
  Rational scale = 1;

  friend bool operator==(const SymbolicSmall&, const SymbolicSmall&) = default;
};

struct RationalInZ {
  RatFun value;

  friend bool operator==(const RationalInZ&, const RationalInZ&) = default;
};

using Coefficient = std::variant<SymbolicSmall, RationalInZ>;

inline bool is_symbolic(const Coefficient& c) { return std::holds_alternative<SymbolicSmall>(c); }
inline bool is_zero(const Coefficient& c) {
  if (auto* r = std::get_if<RationalInZ>(&c)) return r->value.is_zero();
  return std::get<SymbolicSmall>(c).scale == 0;
}
inline Coefficient numeric(const RatFun& f) { return RationalInZ{f}; }
inline Coefficient numeric(int v) { return RationalInZ{RatFun(v)}; }
inline Coefficient symbol(std::string name, bool nonzero = false) {
  return SymbolicSmall{std::move(name), nonzero, 1};
}

/// Orders coefficients for canonical comparison; symbolic after numeric.
inline std::string coefficient_key(const Coefficient& c) {
  if (auto* s = std::get_if<SymbolicSmall>(&c))
    return "s:" + s->name + (s->nonzero ? "!" : "") + "*" + to_string(s->scale);
  return "n:" + to_text(std::get<RationalInZ>(c).value);
}

struct Term {
  Coefficient coeff;
  MultiIndex exps;
};

/// Difference polynomial sum_lambda a_lambda(z) w(z)^l0 w(z+c_1)^l1 ... w(z+c_n)^ln.
class DiffPolynomial {
 public:
  DiffPolynomial() = default;
  DiffPolynomial(std::vector<Shift> shifts, std::vector<Term> terms)
      : shifts_(std::move(shifts)), terms_(std::move(terms)) {
    for (std::size_t j = 0; j < shifts_.size(); ++j) shifts_[j].index = static_cast<int>(j) + 1;
    for (auto& t : terms_) {
      if (t.exps.size() > shifts_.size() + 1)
        throw Error(ErrorKind::BadIndex, "multi-index longer than the shift list");
      t.exps.resize(shifts_.size() + 1, 0);
      for (auto e : t.exps)
        if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
    }
  }

  const std::vector<Shift>& shifts() const { return shifts_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t num_shifts() const { return shifts_.size(); }
  bool empty() const { return terms_.empty(); }

  /// True when no term mentions a shifted variable.
  bool is_w_only() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
      return std::all_of(t.exps.begin() + 1, t.exps.end(), [](Exponent e) { return e == 0; });
    });
  }
  bool has_symbolic() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return is_symbolic(t.coeff); });
  }

 private:
  std::vector<Shift> shifts_;
  std::vector<Term> terms_;
};

/// Merges duplicate multi-indices, drops zero terms, sorts terms lexicographically.
inline DiffPolynomial normalize(const DiffPolynomial& poly) {
  std::map<MultiIndex, Coefficient> merged;
  for (const auto& t : poly.terms()) {
    auto it = merged.find(t.exps);
    if (it == merged.end()) {
      merged.emplace(t.exps, t.coeff);
      continue;
    }
    if (is_symbolic(it->second) || is_symbolic(t.coeff))
      throw Error(ErrorKind::SymbolicDuplicate, "two symbolic terms share a multi-index");
    it->second = RationalInZ{std::get<RationalInZ>(it->second).value + std::get<RationalInZ>(t.coeff).value};
  }
  std::vector<Term> terms;
  for (auto& [exps, c] : merged)
    if (!is_zero(c)) terms.push_back(Term{c, exps});
  return DiffPolynomial(poly.shifts(), std::move(terms));
}

/// Drops shifts that no term uses and renumbers the rest.
inline DiffPolynomial compact_shifts(const DiffPolynomial& p) {
  std::vector<bool> used(p.num_shifts(), false);
  for (const auto& t : p.terms())
    for (std::size_t j = 0; j < p.num_shifts(); ++j)
      if (t.exps[j + 1] != 0) used[j] = true;
  std::vector<Shift> shifts;
  for (std::size_t j = 0; j < p.num_shifts(); ++j)
    if (used[j]) shifts.push_back(p.shifts()[j]);
  std::vector<Term> terms;
  for (const auto& t : p.terms()) {
    MultiIndex e{t.exps[0]};
    for (std::size_t j = 0; j < p.num_shifts(); ++j)
      if (used[j]) e.push_back(t.exps[j + 1]);
    terms.push_back(Term{t.coeff, std::move(e)});
  }
  return DiffPolynomial(std::move(shifts), std::move(terms));
}

namespace detail {
inline void require_terms(const DiffPolynomial& p) {
  if (p.empty()) throw Error(ErrorKind::EmptyPolynomial, "polynomial has no terms");
}
}  // namespace detail

/// deg_vec(P): max |lambda|.
inline Exponent total_degree(const DiffPolynomial& p) {
  detail::require_terms(p);
  Exponent d = 0;
  for (const auto& t : p.terms()) d = std::max(d, total(t.exps));
  return d;
}

/// lambda-hat_{c_j} = max lambda_j, j in 1..n.
inline Exponent shift_degree(const DiffPolynomial& p, int j) {
  if (j < 1 || static_cast<std::size_t>(j) > p.num_shifts())
    throw Error(ErrorKind::BadIndex, "shift index " + std::to_string(j) + " out of range");
  Exponent d = 0;
  for (const auto& t : p.terms()) d = std::max(d, t.exps[j]);
  return d;
}

/// lambda-hat_0 = max lambda_0.
inline Exponent deg0(const DiffPolynomial& p) {
  detail::require_terms(p);
  Exponent d = 0;
  for (const auto& t : p.terms()) d = std::max(d, t.exps[0]);
  return d;
}

/// kappa-hat(P) = sum over shifts of lambda-hat_{c_j}.
inline Exponent weight(const DiffPolynomial& p) {
  detail::require_terms(p);
  Exponent s = 0;
  for (int j = 1; j <= static_cast<int>(p.num_shifts()); ++j) s += shift_degree(p, j);
  return s;
}

/// kappa(P) = max over terms of lambda_1 + ... + lambda_n.
inline Exponent kappa(const DiffPolynomial& p) {
  detail::require_terms(p);
  Exponent d = 0;
  for (const auto& t : p.terms()) d = std::max(d, total(t.exps) - t.exps[0]);
  return d;
}

/// Vanishing order at x_0 = 0: min lambda_0. Symbolic coefficients count as nonzero.
inline Exponent ord0(const DiffPolynomial& p) {
  detail::require_terms(p);
  Exponent d = p.terms().front().exps[0];
  for (const auto& t : p.terms()) d = std::min(d, t.exps[0]);
  return d;
}

inline bool is_homogeneous(const DiffPolynomial& p) {
  detail::require_terms(p);
  const Exponent d = total(p.terms().front().exps);
  return std::all_of(p.terms().begin(), p.terms().end(),
                     [d](const Term& t) { return total(t.exps) == d; });
}

/// Degree in w of a w-only polynomial (the U and Q of a Clunie equation).
inline Exponent w_degree(const DiffPolynomial& p) { return p.empty() ? -1 : deg0(p); }

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

inline std::complex<double> eval_ratfun(const RatFun& f, std::complex<double> z) {
  auto horner = [&](const QPoly& p) {
    std::complex<double> acc = 0;
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * z + to_double(*it);
    return acc;
  };
  std::complex<double> d = horner(f.den());
  if (d == 0.0) throw Error(ErrorKind::PoleHit, "coefficient has a pole at the evaluation point");
  return horner(f.num()) / d;
}

/// P(z, w(z), w(z+c_1), ...). Requires numeric coefficients and finite w at every shifted point.
inline std::complex<double> evaluate(const DiffPolynomial& p, const ComplexFn& w, std::complex<double> z) {
  std::vector<std::complex<double>> vals;
  vals.push_back(w(z));
  for (const auto& s : p.shifts()) vals.push_back(w(z + s.value.to_complex()));
  for (const auto& v : vals)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::PoleHit, "w is not finite at a shifted point");
  std::complex<double> sum = 0;
  for (const auto& t : p.terms()) {
    if (is_symbolic(t.coeff))
      throw Error(ErrorKind::SymbolicCoefficient, "cannot evaluate symbolic coefficient " +
                                                      std::get<SymbolicSmall>(t.coeff).name);
    std::complex<double> prod = eval_ratfun(std::get<RationalInZ>(t.coeff).value, z);
    for (std::size_t j = 0; j < vals.size(); ++j)
      for (Exponent e = 0; e < t.exps[j]; ++e) prod *= vals[j];
    sum += prod;
  }
  return sum;
}

/// Label-independent form: each term keyed by its (shift value -> exponent) map.
inline std::vector<std::string> canonical_form(const DiffPolynomial& p) {
  std::vector<std::string> out;
  for (const auto& t : p.terms()) {
    std::vector<std::pair<ExactComplex, Exponent>> parts;
    for (std::size_t j = 0; j < p.num_shifts(); ++j)
      if (t.exps[j + 1] != 0) parts.emplace_back(p.shifts()[j].value, t.exps[j + 1]);
    std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string key = coefficient_key(t.coeff) + "|" + std::to_string(t.exps[0]);
    for (const auto& [c, e] : parts) key += "|" + to_string(c.re) + "," + to_string(c.im) + "^" + std::to_string(e);
    out.push_back(std::move(key));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool structurally_equal(const DiffPolynomial& a, const DiffPolynomial& b) {
  return canonical_form(a) == canonical_form(b);
}

/// w(z+1)w(z-1) + w(z+1)w(z) + w(z)w(z-1), the running example of the Clunie analysis.
inline DiffPolynomial benchmark_polynomial() {
  std::vector<Shift> shifts{{ExactComplex{1, 0}, 1}, {ExactComplex{-1, 0}, 2}};
  std::vector<Term> terms{{numeric(1), {0, 1, 1}}, {numeric(1), {1, 1, 0}}, {numeric(1), {1, 0, 1}}};
  return normalize(DiffPolynomial(std::move(shifts), std::move(terms)));
}

/// Exact structural test for the benchmark, up to a common nonzero constant factor.
inline bool is_benchmark(const DiffPolynomial& p) {
  DiffPolynomial q = compact_shifts(normalize(p));
  if (q.num_shifts() != 2 || q.terms().size() != 3) return false;
  const auto& s = q.shifts();
  int plus = -1;
  if (s[0].value == ExactComplex{1, 0} && s[1].value == ExactComplex{-1, 0}) plus = 1;
  else if (s[0].value == ExactComplex{-1, 0} && s[1].value == ExactComplex{1, 0}) plus = 2;
  else return false;
  const int minus = 3 - plus;
  std::vector<MultiIndex> want(3, MultiIndex(3, 0));
  want[0][plus] = want[0][minus] = 1;
  want[1][0] = want[1][plus] = 1;
  want[2][0] = want[2][minus] = 1;
  std::optional<RatFun> common;
  for (const auto& w : want) {
    auto it = std::find_if(q.terms().begin(), q.terms().end(), [&](const Term& t) { return t.exps == w; });
    if (it == q.terms().end() || is_symbolic(it->coeff)) return false;
    const RatFun& c = std::get<RationalInZ>(it->coeff).value;
    if (!c.is_constant()) return false;
    if (common && !(*common == c)) return false;
    common = c;
  }
  return true;
}

}  // namespace dnev
