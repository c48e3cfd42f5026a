#ifndef BIVBETA_DENSITY_HPP
#define BIVBETA_DENSITY_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bivbeta/family.hpp"
#include "bivbeta/rng.hpp"
#include "bivbeta/sampling.hpp"
#include "bivbeta/special_functions.hpp"

namespace bivbeta {

namespace detail {

inline void require_open_square(double x, double y, const char* where) {
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0)) {
    throw std::domain_error(std::string(where) + ": point must lie in the open unit square");
  }
}

inline void require_positive_shapes(const AlphaVector& a, const char* where) {
  if (a.size() != 3 || !(a[0] > 0.0 && a[1] > 0.0 && a[2] > 0.0)) {
    throw std::invalid_argument(std::string(where) + ": needs three shapes, all > 0");
  }
}

}  // namespace detail

/// log Gamma(a1 + a2 + a3) - log Gamma(a1) - log Gamma(a2) - log Gamma(a3).
inline double ol_log_normalizer(const AlphaVector& a) {
  detail::require_positive_shapes(a, "ol_log_normalizer");
  return log_gamma(a[0] + a[1] + a[2]) - log_gamma(a[0]) - log_gamma(a[1]) - log_gamma(a[2]);
}

/// log density of (eta, theta) = (X, 1 - Y):
///   eta^(a1-1) (1-eta)^(a2+a3-1) theta^(a1+a3-1) (1-theta)^(a2-1) / [1 - eta (1-theta)]^(a1+a2+a3)
/// scaled by exp(ol_log_normalizer).
inline double ol_minus_log_pdf(double eta, double theta, const AlphaVector& a) {
  detail::require_open_square(eta, theta, "ol_minus_pdf");
  detail::require_positive_shapes(a, "ol_minus_pdf");
  const double a1 = a[0];
  const double a2 = a[1];
  const double a3 = a[2];
  const double one_minus_theta = 1.0 - theta;
  return ol_log_normalizer(a) + (a1 - 1.0) * std::log(eta) + (a2 + a3 - 1.0) * std::log1p(-eta) +
         (a1 + a3 - 1.0) * std::log(theta) + (a2 - 1.0) * std::log(one_minus_theta) -
         (a1 + a2 + a3) * std::log1p(-eta * one_minus_theta);
}

inline double ol_minus_pdf(double eta, double theta, const AlphaVector& a) {
  return std::exp(ol_minus_log_pdf(eta, theta, a));
}

/// Density of (X, Y) itself: (X, 1 - Y) has the OL- law.
inline double ol_plus_pdf(double x, double y, const AlphaVector& a) { return ol_minus_pdf(x, 1.0 - y, a); }

/// Density of (1 - X, 1 - Y).
inline double ol_star_pdf(double x, double y, const AlphaVector& a) { return ol_plus_pdf(1.0 - x, 1.0 - y, a); }

/// Density of (1 - X, Y).
inline double ol_minus_x_pdf(double x, double y, const AlphaVector& a) { return ol_plus_pdf(1.0 - x, y, a); }

/// Joint density for families with a closed form; AN5/AN8 throw.
inline double closed_form_pdf(const FamilySpec& family, double x, double y) {
  switch (family.kind()) {
    case FamilyKind::OLplus: return ol_plus_pdf(x, y, family.alphas());
    case FamilyKind::OLminus: return ol_minus_pdf(x, y, family.alphas());
    case FamilyKind::OLminusX: return ol_minus_x_pdf(x, y, family.alphas());
    case FamilyKind::OLstar: return ol_star_pdf(x, y, family.alphas());
    case FamilyKind::IndependentBetas:
      detail::require_open_square(x, y, "closed_form_pdf");
      return beta_pdf(x, family.betas()[0]) * beta_pdf(y, family.betas()[1]);
    case FamilyKind::AN5:
    case FamilyKind::AN8: break;
  }
  throw std::invalid_argument("closed_form_pdf: " + std::string(family.name()) +
                              " has no closed-form joint density");
}

/// Midpoint of cell i on an m-cell axis.
inline double grid_midpoint(std::size_t i, std::size_t m) {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(m);
}

/// Density values on the m x m midpoint grid of the unit square.
/// cells is row-major with the row indexing x: cell(i, j) sits at (x_i, y_j).
struct DensityGrid {
  FamilySpec family;
  std::size_t m = 0;
  std::vector<double> cells;
  bool estimated = false;
  std::uint64_t n_samples = 0;  ///< 0 for closed forms
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  /// (1/m^2) * sum of raw midpoint densities before rescaling; 1 for histograms.
  double raw_mass = 1.0;

  [[nodiscard]] double cell(std::size_t i, std::size_t j) const { return cells[i * m + j]; }

  /// (1/m^2) * sum of cells.
  [[nodiscard]] double mass() const {
    double s = 0.0;
    for (double c : cells) s += c;
    return s / static_cast<double>(m * m);
  }
};

inline constexpr std::uint64_t kMinHistogramSamples = 10000;
inline constexpr std::uint64_t kDefaultHistogramSamples = 10000000;
inline constexpr std::size_t kDefaultGridSize = 100;

/// Closed forms are evaluated at cell midpoints and rescaled to unit mass
/// (raw_mass keeps the midpoint-rule total). AN5/AN8 are estimated by a
/// histogram of n_samples draws, each count scaled by m^2 / n_samples.
inline DensityGrid density_grid(const FamilySpec& family, std::size_t m, std::uint64_t n_samples,
                                const RngState& rng) {
  if (m < 2) throw std::invalid_argument("density_grid: m must be >= 2");
  DensityGrid grid{family, m, std::vector<double>(m * m, 0.0)};
  grid.seed = rng.seed();
  grid.stream = rng.stream();
  if (family.has_closed_form()) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double v = closed_form_pdf(family, grid_midpoint(i, m), grid_midpoint(j, m));
        grid.cells[i * m + j] = v;
        total += v;
      }
    }
    grid.raw_mass = total / static_cast<double>(m * m);
    if (!(grid.raw_mass > 0.0) || !std::isfinite(grid.raw_mass)) {
      throw std::domain_error("density_grid: closed-form density has no finite mass on the grid");
    }
    for (double& c : grid.cells) c /= grid.raw_mass;
    return grid;
  }
  if (n_samples < kMinHistogramSamples) {
    throw std::invalid_argument("density_grid: " + std::string(family.name()) + " needs --mc-samples >= " +
                                std::to_string(kMinHistogramSamples));
  }
  grid.estimated = true;
  grid.n_samples = n_samples;
  const PairSampler sampler(family);
  std::vector<std::vector<std::uint64_t>> counts(detail::kShards);
  detail::for_each_shard(n_samples, rng, [&](std::uint64_t s, RngState local, std::uint64_t count) {
    auto& c = counts[s];
    c.assign(m * m, 0);
    const double scale = static_cast<double>(m);
    for (std::uint64_t k = 0; k < count; ++k) {
      const auto [x, y] = sampler(local);
      const auto i = std::min(static_cast<std::size_t>(x * scale), m - 1);
      const auto j = std::min(static_cast<std::size_t>(y * scale), m - 1);
      ++c[i * m + j];
    }
  });
  const double to_density = static_cast<double>(m * m) / static_cast<double>(n_samples);
  for (std::size_t k = 0; k < m * m; ++k) {
    std::uint64_t total = 0;
    for (const auto& c : counts) total += c[k];
    grid.cells[k] = static_cast<double>(total) * to_density;
  }
  return grid;
}

}  // namespace bivbeta

#endif  // BIVBETA_DENSITY_HPP
