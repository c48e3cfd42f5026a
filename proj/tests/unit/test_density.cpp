#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bivbeta/density.hpp"
#include "quadrature.hpp"

using bivbeta::AlphaVector;
using bivbeta::FamilySpec;
using bivbeta::RngState;

namespace {

const std::vector<AlphaVector>& ol_parameter_grid() {
  static const std::vector<AlphaVector> grid = {{1, 1, 1}, {3, 1, 1}, {10, 2.5, 5}, {0.5, 2, 0.7}};
  return grid;
}

}  // namespace

TEST(OlDensity, FrozenValueAtCentre) {
  // Gamma(3) * 0.5 * 0.5 / 0.75^3 = 32 / 27
  EXPECT_NEAR(bivbeta::ol_minus_pdf(0.5, 0.5, {1, 1, 1}), 32.0 / 27.0, 1e-14);
}

TEST(OlDensity, AllVariantsIntegrateToOne) {
  for (const auto& a : ol_parameter_grid()) {
    for (const auto& f : {FamilySpec::ol_plus(a), FamilySpec::ol_minus(a), FamilySpec::ol_minus_x(a),
                          FamilySpec::ol_star(a)}) {
      const double total =
          oracle::integrate_unit_square([&](double x, double y) { return bivbeta::closed_form_pdf(f, x, y); });
      EXPECT_NEAR(total, 1.0, 1e-6) << f.name() << " a=(" << a[0] << "," << a[1] << "," << a[2] << ")";
    }
  }
}

TEST(OlDensity, ComplementIdentitiesHoldExactly) {
  RngState rng(21);
  const AlphaVector a{10, 2.5, 5};
  for (int k = 0; k < 100; ++k) {
    const double x = rng.uniform_open();
    const double y = rng.uniform_open();
    EXPECT_EQ(bivbeta::ol_plus_pdf(x, y, a), bivbeta::ol_minus_pdf(x, 1.0 - y, a));
    EXPECT_EQ(bivbeta::ol_star_pdf(x, y, a), bivbeta::ol_plus_pdf(1.0 - x, 1.0 - y, a));
    EXPECT_EQ(bivbeta::ol_minus_x_pdf(x, y, a), bivbeta::ol_plus_pdf(1.0 - x, y, a));
  }
}

TEST(OlDensity, OlMinusEtaMarginalIsBeta) {
  const AlphaVector a{10, 2.5, 5};
  for (double eta = 0.05; eta < 1.0; eta += 0.05) {
    const double marginal = oracle::integrate([&](double t) { return bivbeta::ol_minus_pdf(eta, t, a); }, 0.0, 1.0);
    EXPECT_NEAR(marginal, bivbeta::beta_pdf(eta, {10, 5}), 1e-4) << "eta=" << eta;
  }
  for (double theta = 0.05; theta < 1.0; theta += 0.05) {
    const double marginal =
        oracle::integrate([&](double e) { return bivbeta::ol_minus_pdf(e, theta, a); }, 0.0, 1.0);
    EXPECT_NEAR(marginal, bivbeta::beta_pdf(theta, {5, 2.5}), 1e-4) << "theta=" << theta;
  }
}

TEST(OlDensity, DomainErrors) {
  EXPECT_THROW(bivbeta::ol_minus_pdf(0.0, 0.5, {1, 1, 1}), std::domain_error);
  EXPECT_THROW(bivbeta::ol_minus_pdf(0.5, 1.0, {1, 1, 1}), std::domain_error);
  EXPECT_THROW(bivbeta::ol_minus_pdf(0.5, 0.5, {0, 1, 1}), std::invalid_argument);
  EXPECT_THROW(bivbeta::closed_form_pdf(FamilySpec::an5({1, 1, 1, 1, 1}), 0.5, 0.5), std::invalid_argument);
}

TEST(OlDensity, SamplerHistogramMatchesCellIntegrals) {
  constexpr std::size_t m = 50;
  constexpr std::uint64_t n = 1000000;
  const AlphaVector a{3, 3, 1};
  const auto f = FamilySpec::ol_plus(a);
  const bivbeta::PairSampler draw(f);
  std::vector<double> counts(m * m, 0.0);
  RngState rng(22);
  for (std::uint64_t k = 0; k < n; ++k) {
    const auto [x, y] = draw(rng);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(x * m), m - 1);
    const auto j = std::min<std::size_t>(static_cast<std::size_t>(y * m), m - 1);
    counts[i * m + j] += 1.0;
  }
  // 2500 cells: a per-cell 4-SE band is breached by chance in about one run
  // in six, so allow two breaches and cap every cell at 5 SE.
  double worst = 0.0;
  int beyond_four = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double mass = oracle::integrate_rect([&](double x, double y) { return bivbeta::ol_plus_pdf(x, y, a); },
                                                 double(i) / m, double(i + 1) / m, double(j) / m, double(j + 1) / m);
      const double expected = mass * static_cast<double>(n);
      const double z = (counts[i * m + j] - expected) / std::sqrt(std::max(expected, 1.0));
      worst = std::max(worst, std::abs(z));
      beyond_four += std::abs(z) > 4.0;
    }
  }
  EXPECT_LE(beyond_four, 2);
  EXPECT_LE(worst, 5.0);
}

TEST(DensityGrid, IndependentUniformIsFlat) {
  const auto g = bivbeta::density_grid(FamilySpec::independent({1, 1}, {1, 1}), 10, 0, RngState(1));
  EXPECT_FALSE(g.estimated);
  EXPECT_EQ(g.n_samples, 0u);
  for (double c : g.cells) EXPECT_NEAR(c, 1.0, 1e-14);
}

TEST(DensityGrid, ClosedFormRescaledToUnitMass) {
  for (const auto& a : ol_parameter_grid()) {
    const auto g = bivbeta::density_grid(FamilySpec::ol_minus(a), 100, 0, RngState(1));
    EXPECT_NEAR(g.mass(), 1.0, 1e-9);
    // The midpoint rule is only close to 1 where the density is bounded.
    if (a[0] >= 1.0 && a[1] >= 1.0 && a[2] >= 1.0) EXPECT_NEAR(g.raw_mass, 1.0, 5e-3);
    // Cells keep the shape of the density: ratios are untouched by the rescale.
    const double r = bivbeta::ol_minus_pdf(0.305, 0.705, a) / bivbeta::ol_minus_pdf(0.505, 0.205, a);
    EXPECT_NEAR(g.cell(30, 70) / g.cell(50, 20), r, 1e-12 * r);
    for (double c : g.cells) ASSERT_GE(c, 0.0);
  }
}

TEST(DensityGrid, RowIndexesFirstCoordinate) {
  const auto f = FamilySpec::independent({5, 1}, {1, 1});
  const auto g = bivbeta::density_grid(f, 10, 0, RngState(1));
  EXPECT_LT(g.cell(0, 5), g.cell(9, 5));
  EXPECT_NEAR(g.cell(3, 0), g.cell(3, 9), 1e-12);
}

TEST(DensityGrid, An5HistogramMarginalsMatchBetaCellMasses) {
  constexpr std::size_t m = 100;
  constexpr std::uint64_t n = 2000000;
  const auto f = FamilySpec::an5({5, 5, 5, 5, 1e-4});
  const auto g = bivbeta::density_grid(f, m, n, RngState(23));
  EXPECT_TRUE(g.estimated);
  EXPECT_EQ(g.n_samples, n);
  EXPECT_NEAR(g.mass(), 1.0, 1e-12);
  const auto [mx, my] = bivbeta::marginal_params(f);
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    double col = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      row += g.cell(i, j);
      col += g.cell(j, i);
    }
    const double lo = double(i) / m;
    const double hi = double(i + 1) / m;
    const double px = boost::math::ibeta(mx.a, mx.b, hi) - boost::math::ibeta(mx.a, mx.b, lo);
    const double py = boost::math::ibeta(my.a, my.b, hi) - boost::math::ibeta(my.a, my.b, lo);
    // row / m^2 is the fraction of draws in the slab.
    const double fx = row / double(m * m);
    const double fy = col / double(m * m);
    const double sx = std::sqrt(std::max(px * (1 - px), 1e-12) / n);
    const double sy = std::sqrt(std::max(py * (1 - py), 1e-12) / n);
    worst = std::max({worst, std::abs(fx - px) / sx, std::abs(fy - py) / sy});
  }
  EXPECT_LE(worst, 4.0);
}

TEST(DensityGrid, EstimatedIsDeterministic) {
  const auto f = FamilySpec::an8({1, 2, 3, 4, 5, 6, 7, 8});
  const auto a = bivbeta::density_grid(f, 20, 300000, RngState(5));
  const auto b = bivbeta::density_grid(f, 20, 300000, RngState(5));
  EXPECT_EQ(a.cells, b.cells);
}

TEST(DensityGrid, Preconditions) {
  const auto f = FamilySpec::an5({5, 5, 5, 5, 1});
  EXPECT_THROW(bivbeta::density_grid(f, 100, 9999, RngState(1)), std::invalid_argument);
  EXPECT_THROW(bivbeta::density_grid(FamilySpec::ol_plus({1, 1, 1}), 1, 0, RngState(1)), std::invalid_argument);
}
