#ifndef BIVBETA_DIAGNOSTIC_HPP
#define BIVBETA_DIAGNOSTIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "bivbeta/density.hpp"
#include "bivbeta/family.hpp"
#include "bivbeta/rng.hpp"
#include "bivbeta/special_functions.hpp"

namespace bivbeta {

/// Counts from confirmatory plus screening tests: n subjects, n1 confirmed
/// diseased, k1 screen-positive among the diseased, k2 screen-negative among
/// the n - n1 healthy.
struct DiagnosticData {
  std::uint64_t n = 0;
  std::uint64_t n1 = 0;
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;

  [[nodiscard]] bool valid() const noexcept { return n1 <= n && k1 <= n1 && k2 <= n - n1; }

  void validate() const {
    if (!valid()) {
      throw std::invalid_argument("DiagnosticData: need 0 <= n1 <= n, 0 <= k1 <= n1, 0 <= k2 <= n - n1 (got " +
                                  std::to_string(n) + "," + std::to_string(n1) + "," + std::to_string(k1) + "," +
                                  std::to_string(k2) + ")");
    }
  }

  friend bool operator==(const DiagnosticData&, const DiagnosticData&) = default;
};

struct PriorSpec {
  FamilySpec eta_theta;  ///< first coordinate eta (sensitivity), second theta (specificity)
  BetaParams pi_prior{1.0, 1.0};
};

namespace detail {

inline double log_choose(std::uint64_t n, std::uint64_t k) {
  return log_gamma(static_cast<double>(n) + 1.0) - log_gamma(static_cast<double>(k) + 1.0) -
         log_gamma(static_cast<double>(n - k) + 1.0);
}

/// count * log(p) with 0 * log(0) = 0; p = 0 with count > 0 is a domain error.
inline double count_log(std::uint64_t count, double p, const char* where) {
  if (count == 0) return 0.0;
  if (!(p > 0.0)) throw std::domain_error(std::string(where) + ": zero probability with a nonzero count");
  return static_cast<double>(count) * std::log(p);
}

inline void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(std::string(name) + " must lie in [0, 1]");
}

}  // namespace detail

/// log Pr(K2 = k2, K1 = k1, N1 = n1 | pi, eta, theta), binomial coefficients included.
inline double log_likelihood(double pi, double eta, double theta, const DiagnosticData& d) {
  d.validate();
  detail::require_probability(pi, "log_likelihood: pi");
  detail::require_probability(eta, "log_likelihood: eta");
  detail::require_probability(theta, "log_likelihood: theta");
  const char* where = "log_likelihood";
  return detail::log_choose(d.n, d.n1) + detail::log_choose(d.n1, d.k1) + detail::log_choose(d.n - d.n1, d.k2) +
         detail::count_log(d.k2, theta, where) + detail::count_log(d.n - d.n1 - d.k2, 1.0 - theta, where) +
         detail::count_log(d.k1, eta, where) + detail::count_log(d.n1 - d.k1, 1.0 - eta, where) +
         detail::count_log(d.n1, pi, where) + detail::count_log(d.n - d.n1, 1.0 - pi, where);
}

/// Conjugate update of the prevalence prior.
inline BetaParams pi_posterior(const DiagnosticData& d, const BetaParams& prior) {
  d.validate();
  prior.validate("pi_posterior");
  return {prior.a + static_cast<double>(d.n1), prior.b + static_cast<double>(d.n - d.n1)};
}

class DegeneratePosterior : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Normalized m x m posterior weights over (eta_i, theta_j) midpoints, row = eta.
struct GridPosterior {
  std::size_t m = 0;
  std::vector<double> weights;
  std::vector<double> eta_axis;
  std::vector<double> theta_axis;
  std::optional<PriorSpec> prior;
  DiagnosticData data;
  BetaParams pi_posterior{1.0, 1.0};
  std::uint64_t seed = 0;

  [[nodiscard]] double weight(std::size_t i, std::size_t j) const { return weights[i * m + j]; }

  /// Normalizes nonnegative weights on the midpoint grid.
  static GridPosterior from_weights(std::size_t m, std::vector<double> w) {
    if (m == 0 || w.size() != m * m) throw std::invalid_argument("GridPosterior: need m*m weights");
    double total = 0.0;
    for (double v : w) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("GridPosterior: weights must be >= 0");
      total += v;
    }
    if (!(total > 0.0)) throw DegeneratePosterior("GridPosterior: all weights are zero");
    for (double& v : w) v /= total;
    GridPosterior gp;
    gp.m = m;
    gp.weights = std::move(w);
    gp.eta_axis.resize(m);
    gp.theta_axis.resize(m);
    for (std::size_t i = 0; i < m; ++i) gp.eta_axis[i] = gp.theta_axis[i] = grid_midpoint(i, m);
    return gp;
  }
};

/// Posterior on a prior grid that is already built. pi factors out of the
/// likelihood, so the (eta, theta) kernel is
///   eta^k1 (1-eta)^(n1-k1) theta^k2 (1-theta)^(n-n1-k2) * prior(eta, theta),
/// evaluated in log space with one max-subtraction.
inline GridPosterior joint_posterior(const DiagnosticData& d, const PriorSpec& prior, const DensityGrid& prior_grid) {
  d.validate();
  prior.pi_prior.validate("joint_posterior");
  const std::size_t m = prior_grid.m;
  if (m < 10) throw std::invalid_argument("joint_posterior: m must be >= 10");
  std::vector<double> eta_term(m);
  std::vector<double> theta_term(m);
  const double k1 = static_cast<double>(d.k1);
  const double e1 = static_cast<double>(d.n1 - d.k1);
  const double k2 = static_cast<double>(d.k2);
  const double e2 = static_cast<double>(d.n - d.n1 - d.k2);
  for (std::size_t i = 0; i < m; ++i) {
    const double mid = grid_midpoint(i, m);
    eta_term[i] = (k1 > 0 ? k1 * std::log(mid) : 0.0) + (e1 > 0 ? e1 * std::log1p(-mid) : 0.0);
    theta_term[i] = (k2 > 0 ? k2 * std::log(mid) : 0.0) + (e2 > 0 ? e2 * std::log1p(-mid) : 0.0);
  }
  std::vector<double> logw(m * m);
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double p = prior_grid.cells[i * m + j];
      const double v = p > 0.0 ? eta_term[i] + theta_term[j] + std::log(p) : -std::numeric_limits<double>::infinity();
      logw[i * m + j] = v;
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(hi)) throw DegeneratePosterior("joint_posterior: prior grid has no mass");
  for (double& v : logw) v = std::exp(v - hi);
  auto gp = GridPosterior::from_weights(m, std::move(logw));
  gp.prior = prior;
  gp.data = d;
  gp.pi_posterior = pi_posterior(d, prior.pi_prior);
  gp.seed = prior_grid.seed;
  return gp;
}

/// Reuses one prior grid per (family, m, n_samples, seed, stream) so repeated
/// posteriors differ only through the likelihood.
class PriorGridCache {
 public:
  std::shared_ptr<const DensityGrid> get(const FamilySpec& family, std::size_t m, std::uint64_t n_samples,
                                         const RngState& rng) {
    const std::uint64_t key_samples = family.has_closed_form() ? 0 : n_samples;
    std::lock_guard lock(mutex_);
    for (const auto& e : entries_) {
      if (e.family == family && e.m == m && e.n_samples == key_samples && e.seed == rng.seed() &&
          e.stream == rng.stream()) {
        return e.grid;
      }
    }
    auto grid = std::make_shared<const DensityGrid>(density_grid(family, m, n_samples, rng));
    entries_.push_back({family, m, key_samples, rng.seed(), rng.stream(), grid});
    return grid;
  }

  [[nodiscard]] std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

 private:
  struct Entry {
    FamilySpec family;
    std::size_t m;
    std::uint64_t n_samples;
    std::uint64_t seed;
    std::uint64_t stream;
    std::shared_ptr<const DensityGrid> grid;
  };
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
};

/// Builds (or fetches from cache) the prior grid, then the posterior.
inline GridPosterior joint_posterior(const DiagnosticData& d, const PriorSpec& prior, std::size_t m,
                                     const RngState& rng, PriorGridCache* cache = nullptr,
                                     std::uint64_t n_samples = kDefaultHistogramSamples) {
  if (m < 10) throw std::invalid_argument("joint_posterior: m must be >= 10");
  if (cache != nullptr) return joint_posterior(d, prior, *cache->get(prior.eta_theta, m, n_samples, rng));
  return joint_posterior(d, prior, density_grid(prior.eta_theta, m, n_samples, rng));
}

enum class PosteriorAxis { eta, theta };

inline std::vector<double> marginal_posterior(const GridPosterior& gp, PosteriorAxis axis) {
  std::vector<double> out(gp.m, 0.0);
  for (std::size_t i = 0; i < gp.m; ++i) {
    for (std::size_t j = 0; j < gp.m; ++j) {
      out[axis == PosteriorAxis::eta ? i : j] += gp.weight(i, j);
    }
  }
  return out;
}

struct PosteriorSummary {
  double mean_eta = 0.0;
  double mean_theta = 0.0;
  double sd_eta = 0.0;
  double sd_theta = 0.0;
  std::size_t mode_i = 0;
  std::size_t mode_j = 0;
  double mode_eta = 0.0;
  double mode_theta = 0.0;
  double correlation = 0.0;  ///< 0 when either coordinate has zero spread
};

inline PosteriorSummary posterior_summary(const GridPosterior& gp) {
  PosteriorSummary s;
  double best = -1.0;
  for (std::size_t i = 0; i < gp.m; ++i) {
    for (std::size_t j = 0; j < gp.m; ++j) {
      const double w = gp.weight(i, j);
      s.mean_eta += w * gp.eta_axis[i];
      s.mean_theta += w * gp.theta_axis[j];
      if (w > best) {  // strict: first maximum in (i, j) order wins
        best = w;
        s.mode_i = i;
        s.mode_j = j;
      }
    }
  }
  double vee = 0.0;
  double vtt = 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < gp.m; ++i) {
    const double de = gp.eta_axis[i] - s.mean_eta;
    for (std::size_t j = 0; j < gp.m; ++j) {
      const double w = gp.weight(i, j);
      const double dt = gp.theta_axis[j] - s.mean_theta;
      vee += w * de * de;
      vtt += w * dt * dt;
      cov += w * de * dt;
    }
  }
  s.sd_eta = std::sqrt(vee);
  s.sd_theta = std::sqrt(vtt);
  s.mode_eta = gp.eta_axis[s.mode_i];
  s.mode_theta = gp.theta_axis[s.mode_j];
  s.correlation = (vee > 0.0 && vtt > 0.0) ? std::clamp(cov / std::sqrt(vee * vtt), -1.0, 1.0) : 0.0;
  return s;
}

/// Pr(D | S) and Pr(not D | not S).
struct PredictiveValues {
  double positive = 0.0;  ///< Lambda
  double negative = 0.0;  ///< Psi
};

inline PredictiveValues predictive_values(double pi, double eta, double theta) {
  detail::require_probability(pi, "predictive_values: pi");
  detail::require_probability(eta, "predictive_values: eta");
  detail::require_probability(theta, "predictive_values: theta");
  const double a = eta * pi;
  const double b = (1.0 - theta) * (1.0 - pi);
  const double c = theta * (1.0 - pi);
  const double d = (1.0 - eta) * pi;
  if (!(a + b > 0.0) || !(c + d > 0.0)) throw std::domain_error("predictive_values: degenerate denominator");
  return {a / (a + b), c / (c + d)};
}

/// Posterior predictive Pr(D; S, d) and Pr(not D; not S, d).
///
/// Each proportional form is normalized against its complementary event:
///   A = pi* sum_i eta_i p(eta_i)          B = (1 - pi*) sum_j (1 - theta_j) p(theta_j)
///   C = (1 - pi*) sum_j theta_j p(theta_j)  D = pi* sum_i (1 - eta_i) p(eta_i)
/// giving A / (A + B) and C / (C + D). On a point-mass grid this is exactly
/// predictive_values(pi*, eta, theta).
inline PredictiveValues predictive_propensity(const GridPosterior& gp, double pi_star) {
  if (!(pi_star > 0.0 && pi_star < 1.0)) throw std::domain_error("predictive_propensity: pi* must lie in (0, 1)");
  const auto pe = marginal_posterior(gp, PosteriorAxis::eta);
  const auto pt = marginal_posterior(gp, PosteriorAxis::theta);
  double mean_eta = 0.0;
  double mean_theta = 0.0;
  for (std::size_t i = 0; i < gp.m; ++i) mean_eta += gp.eta_axis[i] * pe[i];
  for (std::size_t j = 0; j < gp.m; ++j) mean_theta += gp.theta_axis[j] * pt[j];
  double miss = 0.0;
  double false_alarm = 0.0;
  for (std::size_t i = 0; i < gp.m; ++i) miss += (1.0 - gp.eta_axis[i]) * pe[i];
  for (std::size_t j = 0; j < gp.m; ++j) false_alarm += (1.0 - gp.theta_axis[j]) * pt[j];
  const double a = mean_eta * pi_star;
  const double b = false_alarm * (1.0 - pi_star);
  const double c = mean_theta * (1.0 - pi_star);
  const double d = miss * pi_star;
  return {a / (a + b), c / (c + d)};
}

/// pi* defaults to the posterior mean of the prevalence.
inline PredictiveValues predictive_propensity(const GridPosterior& gp) {
  return predictive_propensity(gp, gp.pi_posterior.mean());
}

}  // namespace bivbeta

#endif  // BIVBETA_DIAGNOSTIC_HPP
