#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "dnev/diffpoly.hpp"
#include "dnev/ratfun.hpp"

namespace dnev {

enum class Coprimality { Unchecked, Verified, Asserted };

inline std::string_view to_string(Coprimality c) {
  switch (c) {
    case Coprimality::Unchecked: return "Unchecked";
    case Coprimality::Verified: return "Verified";
    case Coprimality::Asserted: return "Asserted";
  }
  return "Unchecked";
}

/// U(z,w) * P(z, w, w(z+c_1), ...) = Q(z,w). U and Q carry no shifts.
struct ClunieEquation {
  DiffPolynomial U;
  DiffPolynomial P;
  DiffPolynomial Q;
  Coprimality coprimality = Coprimality::Unchecked;
  std::string caveat;

  bool symbolic() const { return U.has_symbolic() || P.has_symbolic() || Q.has_symbolic(); }
};

/// Coprimality state is bookkeeping, not structure; it is ignored here.
inline bool structurally_equal(const ClunieEquation& a, const ClunieEquation& b) {
  return structurally_equal(a.U, b.U) && structurally_equal(a.P, b.P) && structurally_equal(a.Q, b.Q);
}

namespace detail {

// ---- syntax tree -------------------------------------------------------------

struct SumAst;

enum class AtomKind { W, WShift, Ident, RatLit, Number, Paren };

struct FactorAst {
  AtomKind kind = AtomKind::W;
  std::size_t pos = 0;
  int slot = 0;  // WShift
  std::string name;  // Ident
  bool nonzero = false;
  RatFun value;  // RatLit, Number
  std::shared_ptr<SumAst> inner;  // Paren
  Exponent exponent = 1;
};

struct TermAst {
  bool negative = false;
  std::size_t pos = 0;
  std::vector<FactorAst> factors;
};

struct SumAst {
  std::size_t pos = 0;
  std::vector<TermAst> terms;
};

// ---- expansion ----------------------------------------------------------------

struct PCoef {
  std::optional<SymbolicSmall> sym;
  RatFun num = RatFun(1);
};

using Mono = std::map<int, Exponent>;  // slot -> exponent, slot 0 is w(z)
using PPoly = std::map<Mono, PCoef>;

inline PCoef mul(const PCoef& a, const PCoef& b, std::size_t pos) {
  if (a.sym && b.sym)
    throw Error(ErrorKind::NonlinearCoefficient, "product of symbolic coefficients " + a.sym->name + " and " +
                                                     b.sym->name, pos);
  if (!a.sym && !b.sym) return PCoef{std::nullopt, a.num * b.num};
  const PCoef& s = a.sym ? a : b;
  const PCoef& n = a.sym ? b : a;
  if (!n.num.is_constant())
    throw Error(ErrorKind::MixedMode, "symbolic coefficient multiplied by a function of z", pos);
  PCoef out = s;
  out.sym->scale *= n.num.constant();
  return out;
}

inline void add_into(PPoly& p, const Mono& m, const PCoef& c, std::size_t pos) {
  auto it = p.find(m);
  if (it == p.end()) {
    p.emplace(m, c);
    return;
  }
  if (it->second.sym || c.sym)
    throw Error(ErrorKind::SymbolicDuplicate, "symbolic coefficient shares a monomial with another term", pos);
  it->second.num = it->second.num + c.num;
  if (it->second.num.is_zero()) p.erase(it);
}

inline PPoly mul(const PPoly& a, const PPoly& b, std::size_t pos) {
  PPoly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m = ma;
      for (const auto& [s, e] : mb) m[s] += e;
      add_into(out, m, mul(ca, cb, pos), pos);
    }
  return out;
}

inline PPoly constant_poly(PCoef c) {
  PPoly p;
  p.emplace(Mono{}, std::move(c));
  return p;
}

inline PPoly expand(const SumAst& s);

inline PPoly expand_factor(const FactorAst& f) {
  PPoly base;
  switch (f.kind) {
    case AtomKind::W: base = PPoly{{Mono{{0, 1}}, PCoef{}}}; break;
    case AtomKind::WShift: base = PPoly{{Mono{{f.slot, 1}}, PCoef{}}}; break;
    case AtomKind::Ident: base = constant_poly(PCoef{SymbolicSmall{f.name, f.nonzero, 1}, RatFun(1)}); break;
    case AtomKind::RatLit:
    case AtomKind::Number:
      if (f.value.is_zero()) return {};
      base = constant_poly(PCoef{std::nullopt, f.value});
      break;
    case AtomKind::Paren: base = expand(*f.inner); break;
  }
  PPoly acc = constant_poly(PCoef{});
  for (Exponent k = 0; k < f.exponent; ++k) acc = mul(acc, base, f.pos);
  return acc;
}

inline PPoly expand_term(const TermAst& t) {
  PPoly acc = constant_poly(PCoef{std::nullopt, RatFun(t.negative ? -1 : 1)});
  for (const auto& f : t.factors) acc = mul(acc, expand_factor(f), f.pos);
  return acc;
}

inline PPoly expand(const SumAst& s) {
  PPoly out;
  for (const auto& t : s.terms)
    for (const auto& [m, c] : expand_term(t)) add_into(out, m, c, t.pos);
  return out;
}

inline bool mentions_shift(const PPoly& p) {
  for (const auto& [m, c] : p)
    for (const auto& [s, e] : m)
      if (s != 0 && e != 0) return true;
  return false;
}

// ---- parser -------------------------------------------------------------------

class EquationParser {
 public:
  explicit EquationParser(std::string_view text) : s_(text) {}

  ClunieEquation parse_equation() {
    SumAst lhs = sum();
    expect('=');
    std::size_t rhs_pos = here();
    SumAst rhs = sum();
    std::optional<SumAst> den;
    std::size_t den_pos = 0;
    if (eat('/')) {
      bool paren_only = rhs.terms.size() == 1 && !rhs.terms[0].negative && rhs.terms[0].factors.size() == 1 &&
                        rhs.terms[0].factors[0].kind == AtomKind::Paren && rhs.terms[0].factors[0].exponent == 1;
      if (!paren_only) throw Error(ErrorKind::SyntaxError, "division needs a parenthesized numerator", rhs_pos);
      rhs = *rhs.terms[0].factors[0].inner;
      skip();
      den_pos = i_;
      if (!eat('(')) fail("expected '(' after '/'");
      den = sum();
      expect(')');
    }
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    check_mode();

    PPoly u = constant_poly(PCoef{});
    PPoly p;
    split_lhs(lhs, u, p);
    PPoly q = expand(rhs);
    if (mentions_shift(q)) throw Error(ErrorKind::ShiftInUQ, "right-hand side mentions a shifted value", rhs_pos);
    if (den) {
      PPoly d = expand(*den);
      if (mentions_shift(d)) throw Error(ErrorKind::ShiftInUQ, "denominator mentions a shifted value", den_pos);
      if (d.empty()) throw Error(ErrorKind::InvalidArgument, "denominator is identically zero", den_pos);
      u = mul(u, d, den_pos);
    }
    if (q.empty()) throw Error(ErrorKind::InvalidArgument, "Q is identically zero", rhs_pos);
    if (u.empty()) throw Error(ErrorKind::InvalidArgument, "U is identically zero", lhs.pos);
    if (p.empty()) throw Error(ErrorKind::EmptyPolynomial, "P is identically zero", lhs.pos);

    ClunieEquation eq;
    eq.U = to_poly(u, false);
    eq.P = compact_shifts(to_poly(p, true));
    eq.Q = to_poly(q, false);
    return eq;
  }

  DiffPolynomial parse_polynomial() {
    SumAst s = sum();
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    check_mode();
    PPoly p = expand(s);
    if (p.empty()) throw Error(ErrorKind::EmptyPolynomial, "polynomial is identically zero", s.pos);
    return compact_shifts(to_poly(p, true));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorKind::SyntaxError, msg, i_); }
  std::size_t here() {
    skip();
    return i_;
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char ch) {
    skip();
    return i_ < s_.size() && s_[i_] == ch;
  }
  bool eat(char ch) {
    if (!peek(ch)) return false;
    ++i_;
    return true;
  }
  void expect(char ch) {
    if (!eat(ch)) fail(std::string("expected '") + ch + "'");
  }
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  SumAst sum() {
    SumAst out;
    out.pos = here();
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    out.terms.push_back(term(neg));
    for (;;) {
      if (eat('+')) out.terms.push_back(term(false));
      else if (eat('-')) out.terms.push_back(term(true));
      else return out;
    }
  }

  TermAst term(bool negative) {
    TermAst t;
    t.negative = negative;
    t.pos = here();
    t.factors.push_back(factor());
    while (eat('*')) t.factors.push_back(factor());
    return t;
  }

  FactorAst factor() {
    FactorAst f = atom();
    if (eat('^')) {
      skip();
      std::size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (st == i_) fail("expected a natural-number exponent");
      if (i_ - st > 3) throw Error(ErrorKind::SyntaxError, "exponent too large", st);
      f.exponent = std::stoll(std::string(s_.substr(st, i_ - st)));
    }
    return f;
  }

  FactorAst atom() {
    FactorAst f;
    f.pos = here();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char ch = s_[i_];
    if (ch == '(') {
      ++i_;
      f.kind = AtomKind::Paren;
      f.inner = std::make_shared<SumAst>(sum());
      expect(')');
      return f;
    }
    if (ch == '{') {
      std::size_t close = s_.find('}', i_);
      if (close == std::string_view::npos) fail("unterminated '{'");
      f.kind = AtomKind::RatLit;
      f.value = RatFunReader(s_.substr(i_ + 1, close - i_ - 1), i_ + 1).parse_all();
      if (!f.value.is_constant()) saw_function_ = f.pos;
      i_ = close + 1;
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      f.kind = AtomKind::Number;
      f.value = RatFun(number());
      return f;
    }
    if (ident_start(ch)) {
      std::size_t st = i_;
      while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
      std::string name(s_.substr(st, i_ - st));
      if (name == "w") {
        if (peek('(')) return shifted(f);
        f.kind = AtomKind::W;
        return f;
      }
      if (name == "z") throw Error(ErrorKind::SyntaxError, "functions of z must be written inside braces", st);
      if (!symbols_.insert(name).second)
        throw Error(ErrorKind::DuplicateSymbol, "symbol '" + name + "' used twice", st);
      if (!saw_symbol_) saw_symbol_ = st;
      f.kind = AtomKind::Ident;
      f.name = name;
      skip();
      if (s_.substr(i_, 3) == "!=0") {
        f.nonzero = true;
        i_ += 3;
      }
      return f;
    }
    fail(std::string("unexpected '") + ch + "'");
  }

  Rational number() {
    skip();
    std::size_t st = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
    try {
      return parse_rational(s_.substr(st, i_ - st));
    } catch (const Error&) {
      throw Error(ErrorKind::SyntaxError, "malformed number", st);
    }
  }

  /// After "w": "(z" followed by signed real/imaginary parts, then ")".
  FactorAst shifted(FactorAst f) {
    expect('(');
    skip();
    if (i_ >= s_.size() || s_[i_] != 'z') fail("expected 'z'");
    ++i_;
    ExactComplex c{0, 0};
    std::size_t shift_pos = here();
    if (eat(')')) {
      f.kind = AtomKind::W;
      return f;
    }
    bool any = false;
    while (!eat(')')) {
      int sign = 0;
      if (eat('+')) sign = 1;
      else if (eat('-')) sign = -1;
      else fail("expected '+' or '-' in shift");
      skip();
      Rational mag = 1;
      bool imag = false;
      if (i_ < s_.size() && s_[i_] == 'i' && (i_ + 1 >= s_.size() || !ident_char(s_[i_ + 1]))) {
        ++i_;
        imag = true;
      } else {
        mag = number();
        if (eat('/')) {
          std::size_t at = here();
          Rational d = number();
          if (d == 0) throw Error(ErrorKind::SyntaxError, "zero denominator in shift", at);
          mag /= d;
        }
        if (eat('*')) {
          skip();
          if (i_ >= s_.size() || s_[i_] != 'i') fail("expected 'i'");
          ++i_;
          imag = true;
        }
      }
      (imag ? c.im : c.re) += sign * mag;
      any = true;
    }
    if (!any) fail("empty shift");
    if (c.is_zero()) throw Error(ErrorKind::ZeroShift, "shift must be nonzero", shift_pos);
    f.kind = AtomKind::WShift;
    f.slot = slot_of(c);
    return f;
  }

  int slot_of(const ExactComplex& c) {
    for (std::size_t k = 0; k < shifts_.size(); ++k)
      if (shifts_[k] == c) return static_cast<int>(k) + 1;
    shifts_.push_back(c);
    return static_cast<int>(shifts_.size());
  }

  void check_mode() const {
    if (saw_symbol_ && saw_function_)
      throw Error(ErrorKind::MixedMode, "symbolic and rational-function coefficients in one equation",
                  std::max(*saw_symbol_, *saw_function_));
  }

  /// A lone product whose parenthesized w-only factors sit beside shifted ones reads as U*P.
  void split_lhs(const SumAst& lhs, PPoly& u, PPoly& p) {
    if (lhs.terms.size() == 1 && !lhs.terms[0].negative) {
      const TermAst& t = lhs.terms[0];
      PPoly uu = constant_poly(PCoef{});
      PPoly pp = constant_poly(PCoef{});
      bool any_u = false;
      for (const auto& f : t.factors) {
        PPoly e = expand_factor(f);
        if (f.kind == AtomKind::Paren && !mentions_shift(e)) {
          uu = mul(uu, e, f.pos);
          any_u = true;
        } else {
          pp = mul(pp, e, f.pos);
        }
      }
      if (any_u && mentions_shift(pp)) {
        u = std::move(uu);
        p = std::move(pp);
        return;
      }
    }
    p = expand(lhs);
  }

  DiffPolynomial to_poly(const PPoly& pp, bool with_shifts) const {
    std::vector<Shift> shifts;
    if (with_shifts)
      for (std::size_t k = 0; k < shifts_.size(); ++k) shifts.push_back(Shift{shifts_[k], static_cast<int>(k) + 1});
    std::vector<Term> terms;
    for (const auto& [m, c] : pp) {
      MultiIndex e(shifts.size() + 1, 0);
      for (const auto& [s, x] : m) e[s] = x;
      Coefficient coeff = c.sym ? Coefficient(*c.sym) : Coefficient(RationalInZ{c.num});
      terms.push_back(Term{coeff, std::move(e)});
    }
    return normalize(DiffPolynomial(std::move(shifts), std::move(terms)));
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<ExactComplex> shifts_;
  std::set<std::string> symbols_;
  std::optional<std::size_t> saw_symbol_;
  std::optional<std::size_t> saw_function_;
};

}  // namespace detail

/// Accepts "P = Q", "P = (Q)/(U)" and "(U)*P = Q".
inline ClunieEquation parse_equation(std::string_view text) {
  return detail::EquationParser(text).parse_equation();
}

inline DiffPolynomial parse_polynomial(std::string_view text) {
  return detail::EquationParser(text).parse_polynomial();
}

/// Coefficients of a w-only polynomial as a polynomial in w over Q(z).
inline UPoly<RatFun> as_w_polynomial(const DiffPolynomial& p) {
  if (!p.is_w_only()) throw Error(ErrorKind::ShiftInUQ, "polynomial mentions a shifted value");
  std::vector<RatFun> c;
  for (const auto& t : p.terms()) {
    if (is_symbolic(t.coeff)) throw Error(ErrorKind::SymbolicCoefficient, "symbolic coefficient");
    auto k = static_cast<std::size_t>(t.exps[0]);
    if (c.size() <= k) c.resize(k + 1, RatFun(0));
    c[k] = c[k] + std::get<RationalInZ>(t.coeff).value;
  }
  return UPoly<RatFun>(std::move(c));
}

inline ClunieEquation validate_no_common_factors(ClunieEquation eq) {
  if (!eq.U.has_symbolic() && !eq.Q.has_symbolic()) {
    auto g = gcd(as_w_polynomial(eq.U), as_w_polynomial(eq.Q));
    if (g.degree() >= 1) throw Error(ErrorKind::CommonFactor, "U and Q share a factor of degree " +
                                                                  std::to_string(g.degree()) + " in w");
    eq.coprimality = Coprimality::Verified;
    eq.caveat.clear();
    return eq;
  }
  if (ord0(eq.U) >= 1 && ord0(eq.Q) >= 1) throw Error(ErrorKind::CommonFactor, "U and Q share the factor w");
  eq.coprimality = Coprimality::Asserted;
  eq.caveat = "symbolic coefficients: coprimality of U and Q assumed for generic values";
  return eq;
}

namespace detail {

inline std::string var_text(const DiffPolynomial& p, std::size_t slot, Exponent e) {
  std::string s = slot == 0 ? "w" : "w(z" + shift_suffix(p.shifts()[slot - 1].value) + ")";
  if (e > 1) s += "^" + std::to_string(e);
  return s;
}

/// Returns (negative, body) where body is empty for a unit coefficient.
inline std::pair<bool, std::string> coefficient_text(const Coefficient& c) {
  if (auto* s = std::get_if<SymbolicSmall>(&c)) {
    std::string name = s->name + (s->nonzero ? "!=0" : "");
    Rational m = abs(s->scale);
    if (m == 1) return {s->scale < 0, name};
    std::string k = denom(m) == 1 ? to_string(m) : "{" + to_string(m) + "}";
    return {s->scale < 0, k + "*" + name};
  }
  RatFun f = std::get<RationalInZ>(c).value;
  bool neg = f.leading_negative();
  if (neg) f = -f;
  if (f.is_one()) return {neg, ""};
  if (f.is_constant() && denom(f.constant()) == 1) return {neg, to_string(f.constant())};
  return {neg, "{" + to_text(f) + "}"};
}

/// Slots reordered by (|c|, then larger real part, then larger imaginary part) so the text
/// does not depend on the order in which shifts were first met.
inline DiffPolynomial canonical_slots(const DiffPolynomial& p) {
  std::vector<std::size_t> order(p.num_shifts());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t j) {
    const auto& c = p.shifts()[j].value;
    return std::tuple<Rational, Rational, Rational>(c.re * c.re + c.im * c.im, -c.re, -c.im);
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  std::vector<Shift> shifts;
  for (std::size_t j : order) shifts.push_back(p.shifts()[j]);
  std::vector<Term> terms;
  for (const auto& t : p.terms()) {
    MultiIndex e(t.exps.size());
    e[0] = t.exps[0];
    for (std::size_t k = 0; k < order.size(); ++k) e[k + 1] = t.exps[order[k] + 1];
    terms.push_back({t.coeff, std::move(e)});
  }
  return normalize(DiffPolynomial(std::move(shifts), std::move(terms)));
}

inline std::string poly_text(const DiffPolynomial& poly) {
  std::string out;
  const DiffPolynomial p = canonical_slots(poly);
  const auto& terms = p.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    auto [neg, body] = coefficient_text(it->coeff);
    std::vector<std::string> parts;
    if (!body.empty()) parts.push_back(body);
    for (std::size_t j = 0; j < it->exps.size(); ++j)
      if (it->exps[j] != 0) parts.push_back(var_text(p, j, it->exps[j]));
    if (parts.empty()) parts.push_back("1");
    if (out.empty()) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? "*" : "") + parts[k];
  }
  return out.empty() ? "0" : out;
}

inline bool is_unit(const DiffPolynomial& p) {
  return p.terms().size() == 1 && p.terms()[0].exps[0] == 0 && !is_symbolic(p.terms()[0].coeff) &&
         std::get<RationalInZ>(p.terms()[0].coeff).value.is_one();
}

}  // namespace detail

inline std::string to_canonical_text(const DiffPolynomial& p) { return detail::poly_text(p); }

inline std::string to_canonical_text(const ClunieEquation& eq) {
  std::string s = detail::poly_text(eq.P) + " = ";
  if (detail::is_unit(eq.U)) return s + detail::poly_text(eq.Q);
  return s + "(" + detail::poly_text(eq.Q) + ")/(" + detail::poly_text(eq.U) + ")";
}

}  // namespace dnev
