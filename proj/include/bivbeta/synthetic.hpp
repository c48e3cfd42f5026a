#ifndef BIVBETA_SYNTHETIC_HPP
#define BIVBETA_SYNTHETIC_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "bivbeta/diagnostic.hpp"
#include "bivbeta/rng.hpp"
#include "bivbeta/special_functions.hpp"

namespace bivbeta {

/// Two unit-variance normal score populations (healthy mean mu0, diseased
/// mean mu1) screened by "score > t means diseased".
struct SynthConfig {
  double pi = 0.35;
  std::uint64_t n = 100;
  double mu0 = 3.0;
  double mu1 = 4.0;
  double t = 3.25;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("SynthConfig: pi must lie in (0, 1)");
    if (!(mu0 < t && t < mu1)) throw std::invalid_argument("SynthConfig: need mu0 < t < mu1");
    if (n == 0) throw std::invalid_argument("SynthConfig: n must be positive");
  }

  /// floor(pi * n); the 1e-9 absorbs binary rounding of products like 0.29 * 100.
  [[nodiscard]] std::uint64_t diseased_count() const {
    return static_cast<std::uint64_t>(std::floor(pi * static_cast<double>(n) + 1e-9));
  }
};

/// (eta, theta) = (Pr(Z > t - mu1), Pr(Z <= t - mu0)).
inline std::pair<double, double> true_params(const SynthConfig& c) {
  if (!(c.mu0 <= c.t && c.t <= c.mu1)) throw std::invalid_argument("true_params: need mu0 <= t <= mu1");
  return {1.0 - std_normal_cdf(c.t - c.mu1), std_normal_cdf(c.t - c.mu0)};
}

/// Diseased scores come from substream 1 of the seed and healthy scores from
/// substream 2, so for a fixed seed the samples for increasing n are nested.
inline DiagnosticData generate(const SynthConfig& c) {
  c.validate();
  DiagnosticData d;
  d.n = c.n;
  d.n1 = c.diseased_count();
  const RngState base(c.seed);
  RngState diseased = base.substream(1);
  RngState healthy = base.substream(2);
  for (std::uint64_t i = 0; i < d.n1; ++i) {
    if (c.mu1 + diseased.normal() > c.t) ++d.k1;
  }
  for (std::uint64_t i = 0; i < d.n - d.n1; ++i) {
    if (c.mu0 + healthy.normal() <= c.t) ++d.k2;
  }
  return d;
}

struct NaiveEstimates {
  double eta = 0.0;    ///< k1 / n1
  double theta = 0.0;  ///< k2 / (n - n1)
  double pi = 0.0;     ///< screen positives / n = (k1 + n - n1 - k2) / n
};

inline NaiveEstimates naive_estimates(const DiagnosticData& d) {
  d.validate();
  if (d.n1 == 0) throw std::domain_error("naive_estimates: n1 = 0, sensitivity undefined");
  if (d.n == d.n1) throw std::domain_error("naive_estimates: n - n1 = 0, specificity undefined");
  const double positives = static_cast<double>(d.k1 + (d.n - d.n1 - d.k2));
  return {static_cast<double>(d.k1) / static_cast<double>(d.n1),
          static_cast<double>(d.k2) / static_cast<double>(d.n - d.n1), positives / static_cast<double>(d.n)};
}

}  // namespace bivbeta

#endif  // BIVBETA_SYNTHETIC_HPP
