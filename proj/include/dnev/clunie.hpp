#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "dnev/diffpoly.hpp"
#include "dnev/eqparse.hpp"
#include "dnev/poleprop.hpp"
#include "dnev/profile.hpp"

namespace dnev {

enum class Violation { NotHomogeneous, Ord0NotZero, Lambda0NotLess, UNotWOnly, QNotWOnly };

inline std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::NotHomogeneous: return "NotHomogeneous";
    case Violation::Ord0NotZero: return "Ord0NotZero";
    case Violation::Lambda0NotLess: return "Lambda0NotLess";
    case Violation::UNotWOnly: return "UNotWOnly";
    case Violation::QNotWOnly: return "QNotWOnly";
  }
  return "";
}

inline std::vector<Violation> check_hypotheses(const PFunctionals& f) {
  std::vector<Violation> v;
  if (!f.homogeneous) v.push_back(Violation::NotHomogeneous);
  if (f.ord0 != 0) v.push_back(Violation::Ord0NotZero);
  if (f.lambda0_hat >= f.deg) v.push_back(Violation::Lambda0NotLess);
  return v;
}

inline std::vector<Violation> check_hypotheses(const ClunieEquation& eq) {
  auto v = check_hypotheses(functionals(eq.P));
  if (!eq.U.is_w_only()) v.push_back(Violation::UNotWOnly);
  if (!eq.Q.is_w_only()) v.push_back(Violation::QNotWOnly);
  return v;
}

struct Admissibility {
  bool admissible = false;
  Exponent kappa_hat = 0;
  Exponent q_term = 0;  // deg_Q - lambda0_hat
  Exponent u_term = 0;  // deg_U - min(lambda0_hat, ord0_Q)
  Exponent deg_R = 0;  // max(deg_Q, deg_U)
  Exponent crude_bound = 0;  // kappa_hat + lambda0_hat
  bool crude_ok = false;
};

inline Admissibility admissible(const DegreeProfile& p) {
  Admissibility a;
  a.kappa_hat = p.kappa_hat;
  a.q_term = p.deg_Q - p.lambda0_hat;
  a.u_term = p.deg_U - std::min(p.lambda0_hat, p.ord0_Q);
  a.admissible = p.kappa_hat >= std::max(a.q_term, a.u_term);
  a.deg_R = std::max(p.deg_Q, p.deg_U);
  a.crude_bound = p.kappa_hat + p.lambda0_hat;
  a.crude_ok = a.deg_R <= a.crude_bound;
  return a;
}

inline Admissibility admissible(const ClunieEquation& eq) {
  auto v = check_hypotheses(eq);
  if (!v.empty()) throw Error(ErrorKind::HypothesesViolated, std::string(to_string(v.front())));
  return admissible(degree_profile(eq));
}

enum class RuledOut { DegreeBound, PolynomialDeg3Growth, RewriteDegU3, ZhangDeg3 };

inline std::string_view to_string(RuledOut r) {
  switch (r) {
    case RuledOut::DegreeBound: return "DegreeBound";
    case RuledOut::PolynomialDeg3Growth: return "PolynomialDeg3Growth";
    case RuledOut::RewriteDegU3: return "RewriteDegU3";
    case RuledOut::ZhangDeg3: return "ZhangDeg3";
  }
  return "";
}

enum class ConclusionKind { PoleDensity, ZeroDensity, Identity };

inline std::string_view to_string(ConclusionKind k) {
  switch (k) {
    case ConclusionKind::PoleDensity: return "PoleDensity";
    case ConclusionKind::ZeroDensity: return "ZeroDensity";
    case ConclusionKind::Identity: return "Identity";
  }
  return "";
}

/// PoleDensity q: q T(r,w) <= N(r,w) + S(r,w). ZeroDensity q: the same for N(r,1/w).
/// Identity: N(r,w) = T(r,w) + S(r,w).
struct Conclusion {
  ConclusionKind kind;
  Rational fraction = 1;

  friend bool operator==(const Conclusion&, const Conclusion&) = default;
};

struct Verdict {
  bool admissible = false;
  std::vector<Conclusion> conclusions;
  std::optional<RuledOut> ruled_out;

  bool has(ConclusionKind k) const {
    return std::any_of(conclusions.begin(), conclusions.end(), [k](const Conclusion& c) { return c.kind == k; });
  }
};

/// Which of the growth-based rules would discard this profile (benchmark P only).
inline std::optional<RuledOut> benchmark_exclusion(const DegreeProfile& p) {
  if (!p.benchmark_P) return std::nullopt;
  if (p.deg_U == 3) return RuledOut::RewriteDegU3;
  if (exclusion_flag(p)) return RuledOut::PolynomialDeg3Growth;
  if (p.deg_Q == 3 && p.D_w > 0) return RuledOut::ZhangDeg3;
  return std::nullopt;
}

/// Conclusions without the admissibility precondition; inadmissible profiles are tagged DegreeBound.
inline Verdict assess(const DegreeProfile& p) {
  Verdict v;
  v.admissible = admissible(p).admissible;
  if (!v.admissible) {
    v.ruled_out = RuledOut::DegreeBound;
    return v;
  }
  if (p.D_w > 0) v.conclusions.push_back({ConclusionKind::PoleDensity, Rational(p.D_w, p.kappa_hat)});
  if (p.tau_w > 0) v.conclusions.push_back({ConclusionKind::ZeroDensity, Rational(p.tau_w, p.deg_P)});
  if (p.kappa_hat == p.D_w) v.conclusions.push_back({ConclusionKind::Identity, 1});
  v.ruled_out = benchmark_exclusion(p);
  return v;
}

inline Verdict verdict(const ClunieEquation& eq) {
  auto hyp = check_hypotheses(eq);
  if (!hyp.empty()) throw Error(ErrorKind::HypothesesViolated, std::string(to_string(hyp.front())));
  DegreeProfile p = degree_profile(eq);
  if (!admissible(p).admissible) throw Error(ErrorKind::NotAdmissible, "weight below the admissibility bound");
  return assess(p);
}

/// The closed-form identity condition: ord0_Q <= lambda0_hat and
/// kappa_hat = deg_U - ord0_Q >= deg_Q - lambda0_hat.
inline bool identity_condition(const DegreeProfile& p) {
  return p.ord0_Q <= p.lambda0_hat && p.kappa_hat == p.deg_U - p.ord0_Q &&
         p.deg_U - p.ord0_Q >= p.deg_Q - p.lambda0_hat;
}

// ---- families -------------------------------------------------------------------

/// A maximal schema of equations sharing (case, deg_U, D_w); ord0_Q and deg_Q range over
/// rectangles clipped to ord0_Q <= deg_Q.
struct FamilySpec {
  std::string case_tag;
  std::string label;
  Exponent ord0_min = 0, ord0_max = 0;
  Exponent deg_U = 0;
  Exponent deg_Q_min = 0, deg_Q_max = 0;
  Exponent D_w = 0;
  std::vector<std::string> side_conditions;
  std::optional<RuledOut> ruled_out;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

inline std::string roman(int n) {
  static const char* table[] = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"};
  return n >= 1 && n <= 10 ? table[n - 1] : std::to_string(n);
}

/// Exhaustive scan over (ord0_Q, deg_U, deg_Q) within the admissibility bound.
inline std::vector<FamilySpec> enumerate_families(const PFunctionals& f) {
  if (!check_hypotheses(f).empty())
    throw Error(ErrorKind::HypothesesViolated, std::string(to_string(check_hypotheses(f).front())));
  const Exponent q_max = f.kappa_hat + f.lambda0_hat;
  using CaseKey = std::pair<Exponent, Exponent>;
  using GroupKey = std::tuple<CaseKey, Exponent, Exponent>;  // case, D_w, deg_U
  std::map<GroupKey, std::vector<std::pair<Exponent, Exponent>>> groups;  // (ord0, deg_Q)
  for (Exponent o = 0; o <= q_max; ++o)
    for (Exponent dq = o; dq <= q_max; ++dq)
      for (Exponent du = 0; du <= f.kappa_hat + std::min(f.lambda0_hat, o); ++du) {
        DegreeProfile p = make_profile(f, du, dq, o);
        if (!admissible(p).admissible) continue;
        CaseKey ck{std::min(f.deg, o), std::min(f.lambda0_hat, o)};
        groups[{ck, p.D_w, du}].emplace_back(o, dq);
      }

  std::vector<FamilySpec> out;
  std::map<CaseKey, int> case_index;
  std::map<CaseKey, int> member;
  for (const auto& [key, cells] : groups) {
    const auto& [ck, D, du] = key;
    if (!case_index.count(ck)) {
      int idx = static_cast<int>(case_index.size()) + 1;
      case_index[ck] = idx;
    }
    FamilySpec s;
    s.case_tag = roman(case_index[ck]);
    s.label = s.case_tag + std::to_string(++member[ck]);
    s.deg_U = du;
    s.D_w = D;
    s.ord0_min = s.ord0_max = cells.front().first;
    s.deg_Q_min = s.deg_Q_max = cells.front().second;
    for (const auto& [o, dq] : cells) {
      s.ord0_min = std::min(s.ord0_min, o);
      s.ord0_max = std::max(s.ord0_max, o);
      s.deg_Q_min = std::min(s.deg_Q_min, dq);
      s.deg_Q_max = std::max(s.deg_Q_max, dq);
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

inline std::string coeff_name(char base, Exponent k) { return std::string(1, base) + std::to_string(k); }

/// a_k w^k + ... + a_0, descending.
inline std::string generic_poly(char base, Exponent k, bool monic) {
  std::string s;
  for (Exponent j = k; j >= 0; --j) {
    std::string mono = j == 0 ? "" : (j == 1 ? "w" : "w^" + std::to_string(j));
    std::string c = monic && j == k ? "" : coeff_name(base, j);
    std::string t = c.empty() ? mono : (mono.empty() ? c : c + "*" + mono);
    s += (s.empty() ? "" : "+") + t;
  }
  return s;
}

}  // namespace detail

/// Nonzero requirements that make the family's degree data exact.
inline std::vector<std::string> side_conditions(const FamilySpec& s) {
  std::vector<std::string> c;
  const Exponent k = s.deg_Q_max - s.ord0_min;
  if (k == 0) {
    c.push_back(detail::coeff_name('a', s.ord0_min));
    return c;
  }
  if (s.ord0_min == s.ord0_max) c.push_back("a0");
  if (s.deg_Q_min == s.deg_Q_max) c.push_back(detail::coeff_name('a', k));
  if (s.deg_U >= 1 && s.ord0_min >= 1) c.push_back("b0");
  return c;
}

/// Right-hand side Q/U of the family in the equation language.
inline std::string family_rhs(const FamilySpec& s) {
  const Exponent o = s.ord0_min;
  const Exponent k = s.deg_Q_max - o;
  std::string q;
  if (k == 0) {
    q = detail::coeff_name('a', o) + (o == 0 ? "" : o == 1 ? "*w" : "*w^" + std::to_string(o));
  } else {
    std::string inner = detail::generic_poly('a', k, false);
    if (o == 0) q = inner;
    else q = std::string(o == 1 ? "w" : "w^" + std::to_string(o)) + "*(" + inner + ")";
  }
  if (s.deg_U == 0) return q;
  return "(" + q + ")/(" + detail::generic_poly('b', s.deg_U, true) + ")";
}

/// Marks the required-nonzero coefficients with the "!=0" suffix.
inline std::string flagged(std::string text, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    for (std::size_t at = 0; (at = text.find(n, at)) != std::string::npos; at += n.size()) {
      bool left = at == 0 || !std::isalnum(static_cast<unsigned char>(text[at - 1]));
      bool right = at + n.size() >= text.size() || !std::isalnum(static_cast<unsigned char>(text[at + n.size()]));
      if (left && right) {
        text.insert(at + n.size(), "!=0");
        break;
      }
    }
  }
  return text;
}

/// A concrete equation of the family with generic symbolic coefficients.
inline ClunieEquation instantiate(const DiffPolynomial& P, const FamilySpec& s) {
  std::string text = to_canonical_text(P) + " = " + flagged(family_rhs(s), side_conditions(s));
  return parse_equation(text);
}

inline std::string family_line(const DiffPolynomial& P, const FamilySpec& s) {
  std::string range = [](Exponent a, Exponent b) {
    return a == b ? std::to_string(a) : std::to_string(a) + ".." + std::to_string(b);
  }(s.deg_Q_min, s.deg_Q_max);
  std::string o = s.ord0_min == s.ord0_max ? std::to_string(s.ord0_min)
                                           : std::to_string(s.ord0_min) + ".." + std::to_string(s.ord0_max);
  std::string conds;
  for (const auto& c : side_conditions(s)) conds += (conds.empty() ? "" : ", ") + c + "!=0";
  std::string line = s.label + " ord0_Q=" + o + " deg_U=" + std::to_string(s.deg_U) + " deg_Q=" + range +
                     " D_w=" + std::to_string(s.D_w) + " : " + to_canonical_text(P) + " = " + family_rhs(s);
  if (!conds.empty()) line += " ; " + conds;
  return line;
}

struct Reduction {
  std::vector<FamilySpec> kept;
  std::vector<FamilySpec> removed;
};

/// Growth-based exclusions under a minimal hyper-type assumption. Benchmark P only.
inline Reduction reduce_families(const DiffPolynomial& P, const std::vector<FamilySpec>& families) {
  if (!is_benchmark(P))
    throw Error(ErrorKind::WrongBenchmark,
                "the reduction rules are established only for w(z+1)w(z-1)+w(z+1)w+ww(z-1)");
  PFunctionals f = functionals(P);
  Reduction r;
  for (FamilySpec s : families) {
    DegreeProfile top = make_profile(f, s.deg_U, s.deg_Q_max, s.ord0_max);
    if (s.deg_U == 3) {
      s.ruled_out = RuledOut::RewriteDegU3;
      r.removed.push_back(s);
    } else if (s.deg_Q_min == 3 && exclusion_flag(top)) {
      s.ruled_out = RuledOut::PolynomialDeg3Growth;
      r.removed.push_back(s);
    } else if (s.deg_Q_max == 3 && s.D_w > 0) {
      if (s.deg_Q_min == 3) {
        s.ruled_out = RuledOut::ZhangDeg3;
        r.removed.push_back(s);
        continue;
      }
      s.deg_Q_max = 2;
      s.label += "'";
      r.kept.push_back(s);
    } else {
      r.kept.push_back(s);
    }
  }
  return r;
}

// ---- reports ------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const DegreeProfile& p) {
  nlohmann::ordered_json j;
  j["deg_P"] = p.deg_P;
  j["kappa_hat"] = p.kappa_hat;
  j["kappa"] = p.kappa;
  j["lambda0_hat"] = p.lambda0_hat;
  j["ord0_P"] = p.ord0_P;
  j["deg_U"] = p.deg_U;
  j["deg_Q"] = p.deg_Q;
  j["ord0_Q"] = p.ord0_Q;
  j["d_w"] = p.d_w;
  j["D_w"] = p.D_w;
  j["tau_w"] = p.tau_w;
  j["generic_assumptions"] = p.generic_assumptions;
  return j;
}

inline nlohmann::ordered_json to_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["admissible"] = v.admissible;
  j["conclusions"] = nlohmann::ordered_json::array();
  for (const auto& c : v.conclusions) {
    nlohmann::ordered_json x;
    x["kind"] = std::string(to_string(c.kind));
    if (c.kind != ConclusionKind::Identity) x["fraction"] = to_string(c.fraction);
    j["conclusions"].push_back(x);
  }
  j["ruled_out"] = v.ruled_out ? nlohmann::ordered_json(std::string(to_string(*v.ruled_out))) : nullptr;
  return j;
}

inline nlohmann::ordered_json to_json(const FamilySpec& s) {
  nlohmann::ordered_json j;
  j["label"] = s.label;
  j["case"] = s.case_tag;
  j["ord0_Q"] = {s.ord0_min, s.ord0_max};
  j["deg_U"] = s.deg_U;
  j["deg_Q"] = {s.deg_Q_min, s.deg_Q_max};
  j["D_w"] = s.D_w;
  j["side_conditions"] = side_conditions(s);
  j["rhs"] = family_rhs(s);
  if (s.ruled_out) j["ruled_out"] = std::string(to_string(*s.ruled_out));
  return j;
}

}  // namespace dnev
