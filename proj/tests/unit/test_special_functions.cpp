#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bivbeta/special_functions.hpp"
#include "quadrature.hpp"

using bivbeta::BetaParams;

namespace {

// ln Gamma(10.1) from a 30-digit evaluation, frozen.
constexpr double kLogGamma10p1 = 13.0275267386332379585;

double beta_density(double x, double a, double b) { return bivbeta::beta_pdf(x, {a, b}); }

}  // namespace

TEST(LogGamma, KnownValues) {
  EXPECT_NEAR(bivbeta::log_gamma(1.0), 0.0, 1e-15);
  EXPECT_NEAR(bivbeta::log_gamma(2.0), 0.0, 1e-15);
  EXPECT_NEAR(bivbeta::log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-14);
  EXPECT_NEAR(bivbeta::log_gamma(10.1), kLogGamma10p1, 1e-12);
  EXPECT_NEAR(bivbeta::log_gamma(1e-4), 9.21028265863396225845, 1e-10);
}

TEST(LogGamma, AgreesWithBoostAcrossRange) {
  for (double x = 1e-3; x <= 1e3; x *= 1.07) {
    EXPECT_NEAR(bivbeta::log_gamma(x), boost::math::lgamma(x), 1e-10) << "x=" << x;
  }
  // Near 1e6 the value is ~1.3e7, so the comparison is relative.
  for (double x = 1e3; x <= 1e6; x *= 1.5) {
    const double ref = boost::math::lgamma(x);
    EXPECT_NEAR(bivbeta::log_gamma(x), ref, 1e-14 * std::abs(ref)) << "x=" << x;
  }
}

TEST(LogGamma, Recurrence) {
  for (double x = 0.1; x <= 50.0; x += 0.37) {
    const double lhs = std::exp(bivbeta::log_gamma(x + 1.0));
    const double rhs = x * std::exp(bivbeta::log_gamma(x));
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-9) << "x=" << x;
  }
}

TEST(LogGamma, RejectsNonPositive) {
  EXPECT_THROW(bivbeta::log_gamma(0.0), std::domain_error);
  EXPECT_THROW(bivbeta::log_gamma(-1.5), std::domain_error);
  EXPECT_THROW(bivbeta::log_gamma(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST(BetaPdf, Examples) {
  EXPECT_NEAR(bivbeta::beta_pdf(0.3, {1, 1}), 1.0, 1e-14);
  EXPECT_NEAR(bivbeta::beta_pdf(0.5, {2, 2}), 1.5, 1e-14);
  EXPECT_NEAR(bivbeta::beta_pdf(0.9, {3, 0.3}), 1.8207380416828367, 1e-12);
}

TEST(BetaPdf, Endpoints) {
  EXPECT_EQ(bivbeta::beta_pdf(0.0, {2, 2}), 0.0);
  EXPECT_EQ(bivbeta::beta_pdf(1.0, {2, 2}), 0.0);
  EXPECT_NEAR(bivbeta::beta_pdf(0.0, {1, 3}), 3.0, 1e-13);
  EXPECT_THROW(bivbeta::beta_pdf(0.0, {0.5, 2}), std::domain_error);
  EXPECT_THROW(bivbeta::beta_pdf(1.2, {2, 2}), std::domain_error);
  EXPECT_THROW(bivbeta::beta_pdf(0.5, {0.0, 2}), std::invalid_argument);
}

TEST(BetaPdf, IntegratesToOne) {
  for (double a : {0.3, 1.0, 3.0, 10.1}) {
    for (double b : {0.3, 1.0, 3.0, 10.1}) {
      const double total = oracle::beta_expectation(beta_density, a, b, [](double) { return 1.0; });
      EXPECT_NEAR(total, 1.0, 1e-6) << "a=" << a << " b=" << b;
    }
  }
}

TEST(Beta2Pdf, Examples) {
  EXPECT_NEAR(bivbeta::beta2_pdf(0.0, {1, 1}), 1.0, 1e-14);
  EXPECT_NEAR(bivbeta::beta2_pdf(1.0, {1, 1}), 0.25, 1e-14);
  // 12 * 4 / 3^5
  EXPECT_NEAR(bivbeta::beta2_pdf(2.0, {3, 2}), 48.0 / 243.0, 1e-13);
  EXPECT_THROW(bivbeta::beta2_pdf(-0.1, {1, 1}), std::domain_error);
}

TEST(Beta2Pdf, IntegratesToOne) {
  for (double a : {0.3, 1.0, 3.0, 10.1}) {
    for (double b : {0.3, 1.0, 3.0, 10.1}) {
      const BetaParams p{a, b};
      // (1, inf) is folded onto (0, 1) by x = 1 / v.
      const double total =
          oracle::integrate([&](double x) { return bivbeta::beta2_pdf(x, p); }, 0.0, 1.0) +
          oracle::integrate(
              [&](double v) {
                // Below 1e-150 the tail holds under 1e-40 of the mass and v * v underflows.
                return v < 1e-150 ? 0.0 : bivbeta::beta2_pdf(1.0 / v, p) / (v * v);
              },
              0.0, 1.0);
      EXPECT_NEAR(total, 1.0, 1e-6) << "a=" << a << " b=" << b;
    }
  }
}

TEST(StdNormalCdf, Values) {
  EXPECT_EQ(bivbeta::std_normal_cdf(0.0), 0.5);
  EXPECT_NEAR(bivbeta::std_normal_cdf(-0.75), 0.2266, 5e-5);
  EXPECT_NEAR(1.0 - bivbeta::std_normal_cdf(-0.75), 0.773, 5e-4);
  EXPECT_NEAR(bivbeta::std_normal_cdf(0.25), 0.599, 5e-4);
  EXPECT_NEAR(bivbeta::std_normal_cdf(-0.75), 0.226627352376868199, 1e-7);
  EXPECT_NEAR(bivbeta::std_normal_cdf(0.25), 0.598706325682923724, 1e-7);
}

TEST(StdNormalCdf, SymmetryAndTails) {
  for (double z = -8.0; z <= 8.0; z += 0.125) {
    EXPECT_NEAR(bivbeta::std_normal_cdf(z) + bivbeta::std_normal_cdf(-z), 1.0, 1e-12);
    const double ref = 0.5 * boost::math::erfc(-z / std::numbers::sqrt2);
    EXPECT_NEAR(bivbeta::std_normal_cdf(z), ref, 1e-7);
  }
}

TEST(BetaMoments, RawMomentsMatchQuadrature) {
  const BetaParams p{3.0, 0.3};
  for (int k = 1; k <= 4; ++k) {
    const double q = oracle::beta_expectation(beta_density, p.a, p.b, [k](double x) { return std::pow(x, k); });
    EXPECT_NEAR(bivbeta::beta_raw_moment(p, k), q, 1e-9) << "k=" << k;
  }
  EXPECT_NEAR(p.mean(), 3.0 / 3.3, 1e-15);
  EXPECT_EQ(p.complemented(), (BetaParams{0.3, 3.0}));
}
