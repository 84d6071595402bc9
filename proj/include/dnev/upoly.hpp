#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dnev/error.hpp"

namespace dnev {

/// Dense univariate polynomial over a field F, coefficients stored low to high.
/// F needs F(0), F(1), the four field operations and equality.
template <class F>
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
  UPoly(const F& constant) {  // NOLINT: implicit lift of scalars
    if (!(constant == F(0))) c_.push_back(constant);
  }

  static UPoly monomial(const F& a, std::size_t k) {
    std::vector<F> v(k + 1, F(0));
    v[k] = a;
    return UPoly(std::move(v));
  }
  static UPoly x() { return monomial(F(1), 1); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<F>& coeffs() const { return c_; }
  F coeff(std::size_t k) const { return k < c_.size() ? c_[k] : F(0); }
  F leading() const { return c_.empty() ? F(0) : c_.back(); }

  /// Multiplicity of the root x = 0.
  int low_order() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (!(c_[k] == F(0))) return static_cast<int>(k);
    return -1;
  }

  template <class X>
  X eval(const X& x) const {
    X acc = X(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

  UPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<F> v(c_.size() - 1, F(0));
    for (std::size_t k = 1; k < c_.size(); ++k) v[k - 1] = c_[k] * F(static_cast<int>(k));
    return UPoly(std::move(v));
  }

  UPoly monic() const {
    if (is_zero()) return *this;
    F lc = leading();
    std::vector<F> v = c_;
    for (auto& a : v) a = a / lc;
    return UPoly(std::move(v));
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<F> v(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) v[k] = a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) v[k] = v[k] + b.c_[k];
    return UPoly(std::move(v));
  }
  friend UPoly operator-(const UPoly& a) {
    std::vector<F> v = a.c_;
    for (auto& x : v) x = F(0) - x;
    return UPoly(std::move(v));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<F> v(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    return UPoly(std::move(v));
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division: returns (q, r) with a = q*b + r, deg r < deg b.
  friend std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
    std::vector<F> rem = a.c_;
    const int db = b.degree();
    if (a.degree() < db) return {UPoly{}, a};
    std::vector<F> q(a.c_.size() - b.c_.size() + 1, F(0));
    const F lb = b.leading();
    for (int k = a.degree(); k >= db; --k) {
      F t = rem[k] / lb;
      q[k - db] = t;
      if (t == F(0)) continue;
      for (int j = 0; j <= db; ++j) rem[k - db + j] = rem[k - db + j] - t * b.c_[j];
    }
    rem.resize(db);
    return {UPoly(std::move(q)), UPoly(std::move(rem))};
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == F(0)) c_.pop_back();
  }

  std::vector<F> c_;
};

/// Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0.
template <class F>
UPoly<F> gcd(UPoly<F> a, UPoly<F> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Square-free decomposition (Yun): returns factors s_k with a = lc * prod s_k^k,
/// index 0 of the result holds s_1. Characteristic zero only.
template <class F>
std::vector<UPoly<F>> squarefree_decomposition(const UPoly<F>& a) {
  std::vector<UPoly<F>> out;
  if (a.degree() < 1) return out;
  UPoly<F> p = a.monic();
  UPoly<F> dp = p.derivative();
  UPoly<F> g = gcd(p, dp);
  UPoly<F> b = divmod(p, g).first;
  UPoly<F> c = divmod(dp, g).first;
  UPoly<F> d = c - b.derivative();
  while (b.degree() >= 1) {
    UPoly<F> s = gcd(b, d);
    out.push_back(s);
    b = divmod(b, s).first;
    c = divmod(d, s).first;
    d = c - b.derivative();
  }
  return out;
}

}  // namespace dnev
