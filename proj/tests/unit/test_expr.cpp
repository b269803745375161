#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "solsurf/error.hpp"
#include "solsurf/expr.hpp"

namespace solsurf::expr {
namespace {

// Expressions paired with a range where they are smooth.
struct Case {
  const char* src;
  double lo, hi;
};

const Case kCorpus[] = {
    {"0.3*v", -2, 2},
    {"1", -2, 2},
    {"v^2 - 3*v + 1", -2, 2},
    {"sin(v)*exp(cos(v))", -3, 3},
    {"2*arctan(exp(2*s))", -2, 2},
    {"atan(s)/(1+s^2)", -2, 2},
    {"arccos(s)", -0.9, 0.9},
    {"acos(s/2)^2", -1.5, 1.5},
    {"sqrt(1 - s^2)*exp(s)", -0.9, 0.9},
    {"log(cosh(u))", -3, 3},
    {"ln(2 + sin(u))", -3, 3},
    {"tanh(2*u + 0.5)", -2, 2},
    {"sinh(u)/sqrt(cosh(u))", -2, 2},
    {"cosh(u)^(-1.5)", -2, 2},
    {"tan(x/2)", -2, 2},
    {"x^x", 0.2, 2},
    {"2^x - x^3/3", -2, 2},
    {"-x^2", -2, 2},
    {"(x - 1)/(x^2 + 1)", -2, 2},
    {"pi*sin(pi*x)", -1, 1},
    {"exp(-x^2/2)", -3, 3},
    {"1/(1 + exp(-x))", -4, 4},
    {"x*sqrt(x^2 + 1)", -2, 2},
    {"sin(cos(sin(t)))", -3, 3},
    {"-(-t)", -1, 1},
    {"2^3^t", -0.5, 0.5},
};

double fd(const Expr& e, double x) {
  const double h = 1e-3 * std::max(1.0, std::abs(x));
  return (-eval(e, x + 2 * h) + 8 * eval(e, x + h) - 8 * eval(e, x - h) + eval(e, x - 2 * h)) /
         (12 * h);
}

TEST(Expr, EvaluatesCorpus) {
  EXPECT_DOUBLE_EQ(eval(parse("1 + 2*3"), 0), 7.0);
  EXPECT_DOUBLE_EQ(eval(parse("2^3^2"), 0), 512.0);
  EXPECT_DOUBLE_EQ(eval(parse("-2^2"), 0), -4.0);
  EXPECT_DOUBLE_EQ(eval(parse("(1 - 2) - 3"), 0), -4.0);
  EXPECT_DOUBLE_EQ(eval(parse("8/4/2"), 0), 1.0);
  EXPECT_DOUBLE_EQ(eval(parse("pi"), 0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(eval(parse("0.3*v"), 2.0), 0.6);
  EXPECT_DOUBLE_EQ(eval(parse("1.5e-3"), 0), 1.5e-3);
  EXPECT_NEAR(eval(parse("2*arctan(exp(2*s))"), 0.0), std::numbers::pi / 2, 1e-15);
}

TEST(Expr, VariableName) {
  EXPECT_EQ(parse("sin(v) + v").variable(), "v");
  EXPECT_EQ(parse("pi/3").variable(), "");
  EXPECT_EQ(parse("alpha_1 * 2").variable(), "alpha_1");
}

TEST(Expr, DerivativeAgreesWithFiniteDifferences) {
  for (const Case& c : kCorpus) {
    const Expr e = parse(c.src);
    const Expr d = diff(e);
    for (int i = 0; i <= 40; ++i) {
      const double x = c.lo + (c.hi - c.lo) * i / 40.0;
      const double want = fd(e, x);
      EXPECT_NEAR(eval(d, x), want, 1e-7 * (1 + std::abs(want))) << c.src << " at " << x;
    }
  }
}

TEST(Expr, SecondDerivative) {
  const Expr e = parse("sin(2*x)");
  const Expr d2 = diff(diff(e));
  EXPECT_NEAR(eval(d2, 0.7), -4 * std::sin(1.4), 1e-14);
}

TEST(Expr, ConstantFolding) {
  EXPECT_EQ(to_string(diff(parse("3*x + 2"))), "3");
  EXPECT_EQ(to_string(diff(parse("7"))), "0");
  EXPECT_EQ(to_string(diff(parse("x"))), "1");
}

TEST(Expr, RoundTrip) {
  for (const Case& c : kCorpus) {
    const Expr e = parse(c.src);
    const std::string s = to_string(e);
    const Expr back = parse(s);
    EXPECT_TRUE(structurally_equal(e, back)) << c.src << " -> " << s;
    EXPECT_EQ(to_string(back), s);
    const Expr d = diff(e);
    EXPECT_TRUE(structurally_equal(d, parse(to_string(d)))) << to_string(d);
  }
}

TEST(Expr, Errors) {
  auto kind_of = [](const char* src) {
    try {
      (void)parse(src);
    } catch (const ParseError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for " << src;
    return ParseError::Kind::kSyntax;
  };
  EXPECT_EQ(kind_of("1 +"), ParseError::Kind::kSyntax);
  EXPECT_EQ(kind_of("(x"), ParseError::Kind::kSyntax);
  EXPECT_EQ(kind_of("x y"), ParseError::Kind::kSyntax);
  EXPECT_EQ(kind_of("foo(x)"), ParseError::Kind::kUnknownIdentifier);
  EXPECT_EQ(kind_of("x + y"), ParseError::Kind::kUnknownIdentifier);
  EXPECT_EQ(kind_of("sin(x, x)"), ParseError::Kind::kArity);
  EXPECT_EQ(kind_of("sin()"), ParseError::Kind::kArity);
  EXPECT_EQ(kind_of("abs(x)"), ParseError::Kind::kUnknownIdentifier);
  EXPECT_EQ(kind_of(""), ParseError::Kind::kSyntax);
  try {
    (void)parse("1 + $");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Expr, DomainErrors) {
  EXPECT_THROW(eval(parse("arccos(x)"), 1.5), DomainError);
  EXPECT_THROW(eval(parse("log(x)"), -1.0), DomainError);
  EXPECT_THROW(eval(parse("sqrt(x)"), -1.0), DomainError);
  EXPECT_THROW(eval(parse("1/x"), 0.0), DomainError);
  EXPECT_THROW(eval(parse("exp(x)"), 1e6), DomainError);
}

TEST(Expr, DeepNestingIsRejectedNotCrashing) {
  std::string deep(5000, '(');
  deep += "x";
  deep += std::string(5000, ')');
  EXPECT_THROW((void)parse(deep), ParseError);
  std::string neg(5000, '-');
  neg += "x";
  EXPECT_THROW((void)parse(neg), ParseError);
}

TEST(Expr, FuzzNeverCrashes) {
  std::mt19937_64 rng(42);
  const std::string alphabet = "0123456789.+-*/^() ,xyepsincoqrtalhE\t";
  const char* tokens[] = {"x", "1", "2.5", "pi", "+", "-", "*", "/", "^", "(", ")",
                          "sin(", "cos(", "exp(", "log(", "sqrt(", "arccos(", "tanh(", ",", "e"};
  std::uniform_int_distribution<std::size_t> len(0, 40);
  for (int n = 0; n < 20000; ++n) {
    std::string s;
    const std::size_t l = len(rng);
    if (n % 2 == 0) {
      std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
      for (std::size_t i = 0; i < l; ++i) s += alphabet[pick(rng)];
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, std::size(tokens) - 1);
      for (std::size_t i = 0; i < l; ++i) s += tokens[pick(rng)];
    }
    try {
      const Expr e = parse(s);
      const std::string printed = to_string(e);
      EXPECT_TRUE(structurally_equal(e, parse(printed))) << s;
      try {
        (void)eval(e, 0.37);
        (void)eval(diff(e), 0.37);
      } catch (const DomainError&) {
      }
    } catch (const ParseError&) {
    }
  }
  // Random bytes, including NUL and high bytes.
  std::uniform_int_distribution<int> byte(0, 255);
  for (int n = 0; n < 5000; ++n) {
    std::string s;
    for (std::size_t i = 0, l = len(rng); i < l; ++i) s += static_cast<char>(byte(rng));
    try {
      (void)parse(s);
    } catch (const ParseError&) {
    }
  }
}

}  // namespace
}  // namespace solsurf::expr
