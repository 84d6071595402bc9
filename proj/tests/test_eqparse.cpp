#include <gtest/gtest.h>

#include <random>

#include "dnev/eqparse.hpp"
#include "dnev/profile.hpp"
#include "support.hpp"

using namespace dnev;

namespace {

ErrorKind kind_of(const char* text) {
  try {
    parse_equation(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Parse, BenchmarkQuotientForm) {
  auto eq = parse_equation("w(z+1)*w(z-1)+w(z+1)*w+w*w(z-1) = (a2*w^2+a1*w+a0)/(w^2+b1*w+b0)");
  EXPECT_EQ(w_degree(eq.U), 2);
  EXPECT_EQ(w_degree(eq.Q), 2);
  EXPECT_EQ(ord0(eq.Q), 0);
  EXPECT_TRUE(is_benchmark(eq.P));
}

TEST(Parse, TrivialShiftEquation) {
  auto eq = parse_equation("w(z+1) = w");
  EXPECT_TRUE(structurally_equal(eq.U, parse_polynomial("1")));
  EXPECT_TRUE(structurally_equal(eq.P, parse_polynomial("w(z+1)")));
  EXPECT_TRUE(structurally_equal(eq.Q, parse_polynomial("w")));
}

TEST(Parse, ProductForm) {
  auto a = parse_equation("(w^2+b1*w+b0)*(w(z+1)*w(z-1)+w(z+1)*w+w*w(z-1)) = a2*w^2+a1*w+a0");
  auto b = parse_equation("w(z+1)*w(z-1)+w(z+1)*w+w*w(z-1) = (a2*w^2+a1*w+a0)/(w^2+b1*w+b0)");
  EXPECT_TRUE(structurally_equal(a, b));
}

TEST(Parse, ShiftsInOrderOfAppearance) {
  auto p = parse_polynomial("w(z-1/2)*w(z+2-i) + w(z+0.5)");
  ASSERT_EQ(p.num_shifts(), 3u);
  EXPECT_EQ(p.shifts()[0].value, (ExactComplex{Rational(-1, 2), 0}));
  EXPECT_EQ(p.shifts()[1].value, (ExactComplex{2, -1}));
  EXPECT_EQ(p.shifts()[2].value, (ExactComplex{Rational(1, 2), 0}));
}

TEST(Parse, Errors) {
  EXPECT_EQ(kind_of("w(z+0)*w = 1"), ErrorKind::ZeroShift);
  EXPECT_EQ(kind_of("w(z+1) = w(z-1)"), ErrorKind::ShiftInUQ);
  EXPECT_EQ(kind_of("a*w(z+1) = {z^2}*w"), ErrorKind::MixedMode);
  EXPECT_EQ(kind_of("a*w(z+1) + a*w = w"), ErrorKind::DuplicateSymbol);
  EXPECT_EQ(kind_of("w(z+1) = (w)/(0)"), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of("w(z+1) +* w = 1"), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of("w(z+1) = w("), ErrorKind::SyntaxError);
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  try {
    parse_equation("w(z+1) = w + #");
    FAIL();
  } catch (const Error& e) {
    ASSERT_TRUE(e.position().has_value());
    EXPECT_EQ(*e.position(), 13u);
  }
}

TEST(Parse, FuzzedInputNeverCrashes) {
  std::mt19937_64 g(3);
  const std::string alphabet = "wz()+-*/^=!{}0123456789abi .";
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1), len(0, 40);
  int parsed = 0;
  for (int it = 0; it < 5000; ++it) {
    std::string s;
    for (std::size_t k = len(g); k > 0; --k) s += alphabet[ch(g)];
    try {
      parse_equation(s);
      ++parsed;
    } catch (const Error&) {
    }
  }
  SUCCEED() << parsed;
}

TEST(Coprimality, NumericCommonFactor) {
  try {
    validate_no_common_factors(parse_equation("w(z+1)*w = (w^2-1)/(w+1)"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CommonFactor);
  }
}

TEST(Coprimality, NumericVerified) {
  auto eq = validate_no_common_factors(parse_equation("w(z+1)*w = (w+1)/(w^2)"));
  EXPECT_EQ(eq.coprimality, Coprimality::Verified);
}

TEST(Coprimality, CommonFactorOverRationalFunctionField) {
  try {
    validate_no_common_factors(parse_equation("w(z+1)*w = (w^2 - {z^2})/(w - {z})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CommonFactor);
  }
}

TEST(Coprimality, SymbolicAsserted) {
  auto eq = validate_no_common_factors(parse_equation("w(z+1)*w = (w*(a1*w+a0))/(w+b0)"));
  EXPECT_EQ(eq.coprimality, Coprimality::Asserted);
  EXPECT_FALSE(eq.caveat.empty());
}

TEST(Canonical, RoundTripAndFixpoint) {
  for (const char* s : {"w(z+1)*w(z-1)+w(z+1)*w+w*w(z-1) = (a2*w^2+a1*w+a0)/(w^2+b1*w+b0)",
                        "1*w(z+1)^1 = w", "{(z^2+1)/(z-2)}*w(z+1)*w = w^2 - {1/2}*w + 3",
                        "w(z+i)*w(z-1/2) = -a0!=0*w"}) {
    auto eq = parse_equation(s);
    std::string t1 = to_canonical_text(eq);
    auto eq2 = parse_equation(t1);
    EXPECT_TRUE(structurally_equal(eq, eq2)) << s << " -> " << t1;
    EXPECT_EQ(to_canonical_text(eq2), t1);
  }
  EXPECT_EQ(to_canonical_text(parse_equation("1*w(z+1)^1 = w")), "w(z+1) = w");
}

TEST(Canonical, NumericCoefficientSurvives) {
  auto eq = parse_equation("{(z^2+1)/(z-2)}*w(z+1) = w");
  std::string t = to_canonical_text(eq);
  EXPECT_NE(t.find("{(z^2+1)/(z-2)}"), std::string::npos) << t;
}

TEST(Canonical, RandomEquationsRoundTrip) {
  testing_support::EquationGen gen(20260101);
  int checked = 0;
  for (int it = 0; it < 1000; ++it) {
    std::string src = gen.next();
    ClunieEquation eq;
    try {
      eq = parse_equation(src);
    } catch (const Error& e) {
      ADD_FAILURE() << "generator produced unparsable text: " << src << " : " << e.what();
      continue;
    }
    std::string t1 = to_canonical_text(eq);
    ClunieEquation eq2 = parse_equation(t1);
    EXPECT_TRUE(structurally_equal(eq, eq2)) << src << "\n  -> " << t1;
    EXPECT_EQ(to_canonical_text(eq2), t1) << src;
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}
