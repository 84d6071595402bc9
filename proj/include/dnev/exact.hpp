#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>
#include <string_view>

#include "dnev/error.hpp"

namespace dnev {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) {
  if (denom(q) == 1) return numer(q).str();
  return numer(q).str() + "/" + denom(q).str();
}

/// Parses "12", "3/4" or a finite decimal "0.125" into an exact rational.
inline Rational parse_rational(std::string_view s) {
  if (s.empty()) throw Error(ErrorKind::InvalidArgument, "empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational a = parse_rational(s.substr(0, slash));
    Rational b = parse_rational(s.substr(slash + 1));
    if (b == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    return a / b;
  }
  BigInt digits = 0;
  BigInt scale = 1;
  bool seen_dot = false;
  bool any = false;
  for (char ch : s) {
    if (ch == '.') {
      if (seen_dot) throw Error(ErrorKind::InvalidArgument, "bad number '" + std::string(s) + "'");
      seen_dot = true;
      continue;
    }
    if (ch < '0' || ch > '9')
      throw Error(ErrorKind::InvalidArgument, "bad number '" + std::string(s) + "'");
    digits = digits * 10 + (ch - '0');
    if (seen_dot) scale *= 10;
    any = true;
  }
  if (!any) throw Error(ErrorKind::InvalidArgument, "bad number '" + std::string(s) + "'");
  return Rational(digits, scale);
}

/// Exact Gaussian rational re + im*i.
struct ExactComplex {
  Rational re;
  Rational im;

  bool is_zero() const { return re == 0 && im == 0; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  friend bool operator==(const ExactComplex&, const ExactComplex&) = default;
  friend bool operator<(const ExactComplex& a, const ExactComplex& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }
  ExactComplex operator-() const { return {-re, -im}; }
};

/// Renders as the signed suffix used inside "w(z...)": "+1", "-1/2", "+2-i", "+i".
inline std::string shift_suffix(const ExactComplex& c) {
  std::string s;
  if (c.re != 0) s += (c.re > 0 ? "+" : "-") + to_string(abs(c.re));
  if (c.im != 0) {
    s += c.im > 0 ? "+" : "-";
    Rational m = abs(c.im);
    if (m != 1) s += to_string(m) + "*";
    s += "i";
  }
  return s;
}

}  // namespace dnev
