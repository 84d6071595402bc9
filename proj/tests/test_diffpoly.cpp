#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dnev/diffpoly.hpp"
#include "dnev/eqparse.hpp"

using namespace dnev;

namespace {

DiffPolynomial P(const char* s) { return parse_polynomial(s); }

Shift shift(int re, int im = 0) { return Shift{ExactComplex{re, im}, 0}; }

}  // namespace

TEST(Normalize, Idempotent) {
  auto p = normalize(benchmark_polynomial());
  EXPECT_TRUE(structurally_equal(p, normalize(p)));
  EXPECT_EQ(canonical_form(p), canonical_form(normalize(normalize(p))));
}

TEST(Normalize, MergesNumericDuplicates) {
  DiffPolynomial p({shift(1)}, {{numeric(2), {1, 0}}, {numeric(3), {1, 0}}});
  auto n = normalize(p);
  ASSERT_EQ(n.terms().size(), 1u);
  EXPECT_EQ(std::get<RationalInZ>(n.terms()[0].coeff).value, RatFun(5));
}

TEST(Normalize, DropsZeroTerms) {
  DiffPolynomial p({shift(1)}, {{numeric(0), {1, 0}}});
  EXPECT_TRUE(normalize(p).empty());
  EXPECT_THROW(total_degree(normalize(p)), Error);
}

TEST(Normalize, SymbolicDuplicateRejected) {
  DiffPolynomial p({shift(1)}, {{symbol("a"), {1, 0}}, {symbol("b"), {1, 0}}});
  try {
    normalize(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SymbolicDuplicate);
  }
}

TEST(Degrees, Benchmark) {
  auto b = benchmark_polynomial();
  EXPECT_EQ(total_degree(b), 2);
  EXPECT_EQ(weight(b), 2);
  EXPECT_EQ(kappa(b), 2);
  EXPECT_EQ(deg0(b), 1);
  EXPECT_EQ(ord0(b), 0);
  EXPECT_EQ(shift_degree(b, 1), 1);
  EXPECT_EQ(shift_degree(b, 2), 1);
  EXPECT_TRUE(is_homogeneous(b));
  EXPECT_THROW(shift_degree(b, 3), Error);
  EXPECT_THROW(shift_degree(b, 0), Error);
}

TEST(Degrees, WorkedExamples) {
  EXPECT_EQ(total_degree(P("a0")), 0);
  EXPECT_EQ(total_degree(P("a*w^3*w(z+1) + b*w(z-1)^2")), 4);

  auto q = P("w^5");
  EXPECT_EQ(deg0(q), 5);
  EXPECT_EQ(weight(q), 0);

  auto r = P("a*w(z+1)^2*w(z-1) + b*w(z+1)");
  EXPECT_EQ(shift_degree(r, 1), 2);
  EXPECT_EQ(shift_degree(r, 2), 1);

  EXPECT_EQ(weight(P("w^4")), 0);
  EXPECT_EQ(kappa(P("w^4")), 0);
  auto k = P("a*w(z+1)^2*w + b*w(z-1)^3*w");
  EXPECT_EQ(weight(k), 5);
  EXPECT_EQ(kappa(k), 3);

  EXPECT_EQ(ord0(P("w^2*(a1*w + a0)")), 2);
  EXPECT_EQ(ord0(P("a2*w^2 + a1*w + a0!=0")), 0);
}

TEST(Degrees, Homogeneity) {
  EXPECT_FALSE(is_homogeneous(P("w(z+1) + w^2")));
  EXPECT_TRUE(is_homogeneous(P("a*w(z+1)^3*w")));
}

TEST(Degrees, InvariantUnderReorderAndScaling) {
  auto a = P("w(z+1)*w(z-1) + 3*w(z+1)*w + w*w(z-1)");
  auto b = P("{1/2}*w*w(z-1) + w(z+1)*w + {7/3}*w(z+1)*w(z-1)");
  EXPECT_EQ(total_degree(a), total_degree(b));
  EXPECT_EQ(weight(a), weight(b));
  EXPECT_EQ(kappa(a), kappa(b));
  EXPECT_EQ(deg0(a), deg0(b));
  EXPECT_EQ(ord0(a), ord0(b));
}

TEST(Degrees, OrderingInvariantsOnRandomPolynomials) {
  std::mt19937_64 g(7);
  std::uniform_int_distribution<int> e(0, 3), nterms(1, 5), nshift(0, 3);
  for (int it = 0; it < 500; ++it) {
    int ns = nshift(g);
    std::vector<Shift> sh;
    for (int j = 0; j < ns; ++j) sh.push_back(shift(j + 1));
    std::vector<Term> terms;
    int nt = nterms(g);
    for (int t = 0; t < nt; ++t) {
      MultiIndex m(ns + 1);
      for (auto& x : m) x = e(g);
      terms.push_back({numeric(t + 1), m});
    }
    auto p = normalize(DiffPolynomial(sh, terms));
    EXPECT_GE(weight(p), kappa(p));
    EXPECT_LE(deg0(p), total_degree(p));
    EXPECT_LE(ord0(p), deg0(p));
    if (is_homogeneous(p)) {
      Exponent min0 = ord0(p);
      EXPECT_EQ(kappa(p), total_degree(p) - min0);
    }
  }
}

TEST(Evaluate, Examples) {
  auto id = [](std::complex<double> z) { return z; };
  EXPECT_NEAR(std::abs(evaluate(P("w(z+1)*w(z-1)"), id, 0.0) - std::complex<double>(-1)), 0, 1e-15);
  auto sq = [](std::complex<double> z) { return z * z; };
  EXPECT_NEAR(std::abs(evaluate(P("w"), sq, 3.0) - std::complex<double>(9)), 0, 1e-15);
  auto ex = [](std::complex<double> z) { return std::exp(z); };
  double want = 1 + std::exp(1.0) + std::exp(-1.0);
  EXPECT_NEAR(std::abs(evaluate(benchmark_polynomial(), ex, 0.0) - want), 0, 1e-14);
}

TEST(Evaluate, Errors) {
  auto id = [](std::complex<double> z) { return z; };
  try {
    evaluate(P("a*w"), id, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SymbolicCoefficient);
  }
  try {
    evaluate(P("{1/(z-2)}*w"), id, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleHit);
  }
}

// Term-by-term oracle on random numeric instances.
TEST(Evaluate, AgreesWithDirectProduct) {
  std::mt19937_64 g(11);
  std::uniform_int_distribution<int> e(0, 3), c(-4, 4);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<std::complex<double>> shifts{{1, 0}, {-1, 0}, {0.5, 0}, {0, 1}};
  for (int it = 0; it < 100; ++it) {
    std::vector<Shift> sh{{ExactComplex{1, 0}, 0}, {ExactComplex{-1, 0}, 0}, {ExactComplex{Rational(1, 2), 0}, 0},
                          {ExactComplex{0, 1}, 0}};
    std::vector<Term> terms;
    std::vector<std::pair<int, MultiIndex>> raw;
    for (int t = 0; t < 4; ++t) {
      MultiIndex m(5);
      for (auto& x : m) x = e(g);
      int k = c(g);
      if (k == 0) k = 1;
      terms.push_back({numeric(k), m});
      raw.push_back({k, m});
    }
    DiffPolynomial p(sh, terms);  // not normalized: duplicate indices must still sum correctly
    std::complex<double> a(u(g), u(g)), b(u(g), u(g));
    auto w = [a, b](std::complex<double> z) { return a * z + b * std::sin(z); };
    std::complex<double> z(u(g), u(g));
    std::complex<double> want = 0;
    for (auto& [k, m] : raw) {
      std::complex<double> prod = static_cast<double>(k) * std::pow(w(z), static_cast<int>(m[0]));
      for (std::size_t j = 1; j < m.size(); ++j) prod *= std::pow(w(z + shifts[j - 1]), static_cast<int>(m[j]));
      want += prod;
    }
    auto got = evaluate(normalize(p), w, z);
    EXPECT_LE(std::abs(got - want), 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(Benchmark, Recognition) {
  EXPECT_TRUE(is_benchmark(benchmark_polynomial()));
  EXPECT_TRUE(is_benchmark(P("2*w*w(z-1) + 2*w(z-1)*w(z+1) + 2*w(z+1)*w")));
  EXPECT_FALSE(is_benchmark(P("w(z+1)*w(z-1) + w(z+1)*w + 2*w*w(z-1)")));
  EXPECT_FALSE(is_benchmark(P("w(z+2)*w(z-1) + w(z+2)*w + w*w(z-1)")));
}
