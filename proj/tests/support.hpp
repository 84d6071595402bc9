#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(DNEV_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Raw exponent tables, independent of the library's polynomial type.
using Table = std::vector<std::vector<int>>;

struct RawFunctionals {
  int deg = 0, kappa_hat = 0, lambda0_hat = 0;
};

inline RawFunctionals raw_functionals(const Table& t) {
  RawFunctionals f;
  const std::size_t width = t.front().size();
  for (const auto& row : t) {
    int s = 0;
    for (int e : row) s += e;
    f.deg = std::max(f.deg, s);
    f.lambda0_hat = std::max(f.lambda0_hat, row[0]);
  }
  for (std::size_t j = 1; j < width; ++j) {
    int m = 0;
    for (const auto& row : t) m = std::max(m, row[j]);
    f.kappa_hat += m;
  }
  return f;
}

/// The admissibility inequality written out directly.
inline bool oracle_admissible(const Table& P, int deg_U, int deg_Q, int ord0_Q) {
  RawFunctionals f = raw_functionals(P);
  int lhs = f.kappa_hat;
  int a = deg_Q - f.lambda0_hat;
  int b = deg_U - std::min(f.lambda0_hat, ord0_Q);
  return lhs >= a && lhs >= b;
}

inline int oracle_D(const Table& P, int deg_U, int deg_Q, int ord0_Q) {
  int degP = raw_functionals(P).deg;
  int d = std::max(deg_Q, degP + deg_U) - std::min(degP, ord0_Q);
  return d - degP;
}

/// Homogeneous exponent table of total degree d over `shifts` shifted variables, with at
/// least one term free of w(z).
inline Table random_homogeneous(std::mt19937_64& g, int d, int shifts) {
  std::set<std::vector<int>> rows;
  std::uniform_int_distribution<int> slot(0, shifts);
  std::uniform_int_distribution<int> count(1, 4);
  int want = count(g);
  for (int tries = 0; static_cast<int>(rows.size()) < want && tries < 100; ++tries) {
    std::vector<int> e(shifts + 1, 0);
    for (int k = 0; k < d; ++k) ++e[slot(g)];
    rows.insert(e);
  }
  std::vector<int> free(shifts + 1, 0);
  for (int k = 0; k < d; ++k) ++free[1 + k % shifts];
  rows.insert(free);
  return Table(rows.begin(), rows.end());
}

inline std::string shift_var(int slot, const std::vector<std::string>& shifts) {
  return slot == 0 ? "w" : "w(z" + shifts[slot - 1] + ")";
}

/// Text of sum of monomials, coefficient 1, from an exponent table.
inline std::string table_text(const Table& t, const std::vector<std::string>& shifts) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += " + ";
    std::vector<std::string> f;
    for (std::size_t j = 0; j < t[i].size(); ++j)
      if (t[i][j] > 0) f.push_back(shift_var(static_cast<int>(j), shifts) + (t[i][j] > 1 ? "^" + std::to_string(t[i][j]) : ""));
    if (f.empty()) f.push_back("1");
    for (std::size_t k = 0; k < f.size(); ++k) s += (k ? "*" : "") + f[k];
  }
  return s;
}

/// Random well-formed equation text exercising both coefficient modes and all three layouts.
class EquationGen {
 public:
  explicit EquationGen(std::uint64_t seed) : g_(seed) {}

  std::string next() {
    symbolic_ = coin(0.5);
    next_name_ = 0;
    static const std::vector<std::string> pool{"+1", "-1", "+2", "+1/2", "-3/4", "+i", "-1+2*i", "+3-i", "-2*i"};
    std::vector<std::string> shifts;
    std::vector<int> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::shuffle(idx.begin(), idx.end(), g_);
    int ns = pick(1, 3);
    for (int k = 0; k < ns; ++k) shifts.push_back(pool[idx[k]]);

    std::string P = poly(ns, shifts, true);
    std::string Q = poly(0, shifts, false);
    int layout = pick(0, 2);
    if (layout == 0) return P + " = " + Q;
    std::string U = poly(0, shifts, false);
    if (layout == 1) return P + " = (" + Q + ")/(" + U + ")";
    return "(" + U + ")*(" + P + ") = " + Q;
  }

 private:
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(g_) < p; }
  int pick(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g_); }

  std::string coefficient() {
    if (symbolic_) {
      int r = pick(0, 5);
      if (r == 0) return "";
      std::string name = std::string(1, "abcd"[pick(0, 3)]) + std::to_string(next_name_++);
      if (coin(0.3)) name += "!=0";
      if (r == 1) return "{1/2}*" + name;
      if (r == 2) return "3*" + name;
      return name;
    }
    static const std::vector<std::string> nums{"", "", "2", "7", "{1/3}", "{z}", "{(z^2+1)/(z-2)}", "{z/(z+1)}",
                                               "{(3*z-1)/2}"};
    return nums[pick(0, static_cast<int>(nums.size()) - 1)];
  }

  std::string poly(int ns, const std::vector<std::string>& shifts, bool need_shift) {
    std::set<std::vector<int>> monos;
    int want = pick(1, 4);
    for (int tries = 0; static_cast<int>(monos.size()) < want && tries < 50; ++tries) {
      std::vector<int> e(ns + 1, 0);
      for (auto& x : e) x = pick(0, 2);
      monos.insert(e);
    }
    if (need_shift) {
      std::vector<int> e(ns + 1, 0);
      e[pick(1, ns)] = 1;
      monos.insert(e);
    }
    std::string s;
    bool first = true;
    for (const auto& m : monos) {
      std::string c = coefficient();
      std::vector<std::string> f;
      if (!c.empty()) f.push_back(c);
      for (std::size_t j = 0; j < m.size(); ++j)
        if (m[j] > 0) f.push_back(shift_var(static_cast<int>(j), shifts) + (m[j] > 1 ? "^" + std::to_string(m[j]) : ""));
      if (f.empty()) f.push_back("1");
      std::string term;
      for (std::size_t k = 0; k < f.size(); ++k) term += (k ? "*" : "") + f[k];
      if (first) s += coin(0.2) ? "-" + term : term;
      else s += (coin(0.3) ? " - " : " + ") + term;
      first = false;
    }
    return s;
  }

  std::mt19937_64 g_;
  bool symbolic_ = false;
  int next_name_ = 0;
};

// Frozen output of tests/oracle/example_product_oracle.py.
struct ExampleOracle {
  long n2 = 0;
  double threshold_m = 0, threshold_T = 0;
  std::vector<std::vector<double>> rows;  // r, T_f, T_fc, m_ratio, ratio_m, ratio_T
};

inline ExampleOracle read_example_oracle(const std::string& path) {
  ExampleOracle o;
  std::istringstream in(slurp(path));
  std::string line;
  auto value = [&](const std::string& key) {
    auto p = line.find(key + "=");
    return p == std::string::npos ? std::string() : line.substr(p + key.size() + 1, line.find(' ', p) - p - key.size() - 1);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (auto v = value("n2"); !v.empty()) o.n2 = std::stol(v);
      if (auto v = value("threshold_m"); !v.empty()) o.threshold_m = std::stod(v);
      if (auto v = value("threshold_T"); !v.empty()) o.threshold_T = std::stod(v);
      continue;
    }
    if (line[0] == 'r') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    for (std::string c; std::getline(cells, c, ',');) row.push_back(std::stod(c));
    o.rows.push_back(row);
  }
  return o;
}

}  // namespace testing_support
