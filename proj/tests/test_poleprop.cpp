#include <gtest/gtest.h>

#include <cmath>

#include "dnev/eqparse.hpp"
#include "dnev/poleprop.hpp"
#include "dnev/profile.hpp"

using namespace dnev;

namespace {

// Hand iteration c -> ceil(3c/2) in plain integers.
std::vector<long> hand_ceilings(long c0, int steps) {
  std::vector<long> out{c0};
  for (int n = 0; n < steps; ++n) out.push_back((3 * out.back() + 1) / 2);
  return out;
}

PFunctionals bench() { return functionals(benchmark_polynomial()); }

}  // namespace

TEST(Chain, ExactBounds) {
  auto c = chain(1, 100);
  Rational q = 1;
  for (std::size_t n = 0; n <= 100; ++n) {
    EXPECT_EQ(c.bounds[n], q);
    q *= Rational(3, 2);
  }
  EXPECT_EQ(c.bounds[7], Rational(2187, 128));
}

TEST(Chain, CeilingPrefix) {
  auto c = chain(1, 7);
  std::vector<BigInt> want{1, 2, 3, 5, 8, 12, 18, 27};
  EXPECT_EQ(c.ceilings, want);
  auto h = hand_ceilings(1, 30);
  auto d = chain(1, 30);
  for (std::size_t n = 0; n < h.size(); ++n) EXPECT_EQ(d.ceilings[n], BigInt(h[n]));
}

TEST(Chain, Invariants) {
  auto c = chain(3, 200);
  for (std::size_t n = 1; n < c.size(); ++n) {
    EXPECT_GT(c.bounds[n], c.bounds[n - 1]);
    EXPECT_GE(c.ceilings[n], c.ceilings[n - 1]);
    EXPECT_GE(Rational(c.ceilings[n]), c.bounds[n]);
    // ceiling loss bound: c_n / c_{n-1} >= 3/2 - 1/c_{n-1}
    EXPECT_GE(Rational(c.ceilings[n], c.ceilings[n - 1]), Rational(3, 2) - Rational(1, c.ceilings[n - 1]));
  }
  // dominates n^3 within 200 steps
  bool dominated = false;
  for (std::size_t n = 1; n < c.size(); ++n)
    if (c.bounds[n] > Rational(BigInt(n) * n * n)) dominated = true;
  EXPECT_TRUE(dominated);
  EXPECT_GT(c.bounds[200], Rational(BigInt(200) * 200 * 200));
}

TEST(Chain, LinearInK0) {
  auto a = chain(1, 40), b = chain(2, 40);
  for (std::size_t n = 0; n < a.size(); ++n) EXPECT_EQ(b.bounds[n], 2 * a.bounds[n]);
}

TEST(Chain, OverflowAndArguments) {
  try {
    chain(1, kMaxChainSteps + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
  EXPECT_THROW(chain(0, 3), Error);
}

TEST(Chain, BlacklistReanchors) {
  auto c = chain(1, 6, {2});
  EXPECT_TRUE(c.skipped[2]);
  EXPECT_EQ(c.bounds[2], Rational(0));
  EXPECT_EQ(c.bounds[3], Rational(1));
  EXPECT_EQ(c.bounds[4], Rational(3, 2));
  EXPECT_EQ(c.ceilings[4], BigInt(2));
}

TEST(Growth, FittedConstantHoldsAtEveryPoint) {
  auto c = chain(1, 20);
  auto g = growth_lower_bound(c);
  EXPECT_DOUBLE_EQ(g.D, 1.5);
  EXPECT_GT(g.K, 0);
  for (std::size_t n = 0; n < c.size(); ++n) {
    double t = g.r0 + static_cast<double>(n) + 1;
    EXPECT_GE(g.counting[n], g.K * std::pow(g.D, t) * (1 - 1e-12));
  }
}

TEST(Growth, ScalesWithK0) {
  auto a = growth_lower_bound(chain(1, 20));
  auto b = growth_lower_bound(chain(2, 20));
  EXPECT_NEAR(b.K, 2 * a.K, 1e-12 * a.K);
  EXPECT_EQ(a.D, b.D);
}

TEST(Growth, SinglePoint) {
  auto g = growth_lower_bound(chain(1, 0));
  ASSERT_EQ(g.counting.size(), 1u);
  EXPECT_NEAR(g.K, std::log(2.0) / 2.25, 1e-15);
}

TEST(Exclusion, Flag) {
  EXPECT_TRUE(exclusion_flag(make_profile(bench(), 0, 3, 0)));
  EXPECT_FALSE(exclusion_flag(make_profile(bench(), 0, 2, 0)));
  EXPECT_FALSE(exclusion_flag(make_profile(bench(), 1, 3, 0)));
  auto other = make_profile(functionals(parse_polynomial("w(z+1)*w(z-1) + w(z+1)*w")), 0, 3, 0);
  try {
    exclusion_flag(other);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongBenchmark);
  }
}
