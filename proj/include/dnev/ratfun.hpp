#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "dnev/exact.hpp"
#include "dnev/upoly.hpp"

namespace dnev {

using QPoly = UPoly<Rational>;

/// Element of Q(z), kept reduced with a monic denominator so that equality is structural.
class RatFun {
 public:
  RatFun() : num_(), den_(Rational(1)) {}
  RatFun(int v) : RatFun(Rational(v)) {}  // NOLINT
  RatFun(const Rational& v) : num_(v), den_(Rational(1)) {}  // NOLINT
  RatFun(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

  static RatFun z() { return RatFun(QPoly::x(), QPoly(Rational(1))); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_one() const { return den_.degree() == 0 && num_ == QPoly(Rational(1)); }
  /// Constant value; only meaningful when is_constant().
  Rational constant() const { return num_.coeff(0) / den_.coeff(0); }

  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a) { return RatFun(-a.num_, a.den_); }
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    return RatFun(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by the zero rational function");
    return RatFun(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend bool operator==(const RatFun& a, const RatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RatFun pow(unsigned k) const {
    RatFun acc(1);
    for (unsigned i = 0; i < k; ++i) acc = acc * *this;
    return acc;
  }

  /// Sign of the leading numerator coefficient after clearing denominators.
  bool leading_negative() const { return !num_.is_zero() && num_.leading() < 0; }

 private:
  void reduce() {
    if (den_.is_zero()) throw Error(ErrorKind::InvalidArgument, "rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = QPoly(Rational(1));
      return;
    }
    QPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = divmod(num_, g).first;
      den_ = divmod(den_, g).first;
    }
    Rational lc = den_.leading();
    if (lc != 1) {
      num_ = num_ * QPoly(Rational(1) / lc);
      den_ = den_ * QPoly(Rational(1) / lc);
    }
  }

  QPoly num_;
  QPoly den_;
};

namespace detail {

inline BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / gcd(a, b) * b; }

/// Integer coefficient vector proportional to p (content not removed).
inline std::vector<BigInt> scaled_integers(const QPoly& p, const BigInt& scale) {
  std::vector<BigInt> out;
  for (const auto& c : p.coeffs()) out.push_back(numer(c * scale) / denom(c * scale));
  return out;
}

inline std::string int_poly_text(const std::vector<BigInt>& c, std::string_view var) {
  std::string s;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    const BigInt& a = c[k];
    if (a == 0) continue;
    BigInt m = abs(a);
    if (s.empty()) {
      if (a < 0) s += "-";
    } else {
      s += a < 0 ? "-" : "+";
    }
    if (k == 0) {
      s += m.str();
      continue;
    }
    if (m != 1) s += m.str() + "*";
    s += var;
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s.empty() ? "0" : s;
}

inline std::size_t int_poly_terms(const std::vector<BigInt>& c) {
  std::size_t n = 0;
  for (const auto& a : c) n += (a != 0);
  return n;
}

}  // namespace detail

/// Text with integer coefficients: "z^2+1", "(z+2)/2", "(z^2+1)/(z-2)".
inline std::string to_text(const RatFun& f) {
  if (f.is_zero()) return "0";
  BigInt L = 1;
  for (const auto& c : f.num().coeffs()) L = detail::lcm_big(L, denom(c));
  for (const auto& c : f.den().coeffs()) L = detail::lcm_big(L, denom(c));
  auto n = detail::scaled_integers(f.num(), L);
  auto d = detail::scaled_integers(f.den(), L);
  BigInt g = 0;
  for (const auto& a : n) g = gcd(g, abs(a));
  for (const auto& a : d) g = gcd(g, abs(a));
  for (auto& a : n) a /= g;
  for (auto& a : d) a /= g;
  std::string ns = detail::int_poly_text(n, "z");
  if (d.size() == 1 && d[0] == 1) return ns;
  std::string ds = detail::int_poly_text(d, "z");
  if (detail::int_poly_terms(n) > 1) ns = "(" + ns + ")";
  bool plain_den = d.size() == 1 && d[0] > 0;
  if (!plain_den) ds = "(" + ds + ")";
  return ns + "/" + ds;
}

/// Recursive-descent reader for rational expressions in z:
/// expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
/// unary := '-' unary | power ; power := primary ('^' nat)? ;
/// primary := number | 'z' | '(' expr ')'.
/// Positions in errors are offsets into `text` plus `base`.
class RatFunReader {
 public:
  RatFunReader(std::string_view text, std::size_t base = 0) : s_(text), base_(base) {}

  RatFun parse_all() {
    RatFun r = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError, msg, base_ + i_);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char ch) {
    skip();
    if (i_ < s_.size() && s_[i_] == ch) {
      ++i_;
      return true;
    }
    return false;
  }
  RatFun expr() {
    RatFun acc = term();
    for (;;) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }
  RatFun term() {
    RatFun acc = unary();
    for (;;) {
      if (eat('*')) {
        acc = acc * unary();
      } else if (eat('/')) {
        std::size_t at = i_;
        RatFun d = unary();
        if (d.is_zero()) throw Error(ErrorKind::SyntaxError, "division by zero", base_ + at);
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }
  RatFun unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  RatFun power() {
    RatFun b = primary();
    if (eat('^')) {
      skip();
      std::size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (st == i_) fail("expected exponent");
      if (i_ - st > 4) fail("exponent too large");
      b = b.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(st, i_ - st)))));
    }
    return b;
  }
  RatFun primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of expression");
    char ch = s_[i_];
    if (ch == '(') {
      ++i_;
      RatFun r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (ch == 'z') {
      ++i_;
      return RatFun::z();
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t st = i_;
      while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
      try {
        return RatFun(parse_rational(s_.substr(st, i_ - st)));
      } catch (const Error&) {
        throw Error(ErrorKind::SyntaxError, "malformed number", base_ + st);
      }
    }
    fail(std::string("unexpected '") + ch + "'");
  }

  std::string_view s_;
  std::size_t base_;
  std::size_t i_ = 0;
};

inline RatFun parse_ratfun(std::string_view text) { return RatFunReader(text).parse_all(); }

}  // namespace dnev
