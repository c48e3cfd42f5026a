#ifndef BIVBETA_SAMPLING_HPP
#define BIVBETA_SAMPLING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "bivbeta/family.hpp"
#include "bivbeta/rng.hpp"

namespace bivbeta {

/// log of an exact Gamma(shape, 1) draw; -inf for shape 0.
///
/// Marsaglia-Tsang squeeze for shape >= 1. Below 1 the draw is
/// Gamma(shape + 1) * U^(1/shape), kept in log space: for shape 1e-4 the
/// factor U^(1/shape) is routinely below the smallest double.
inline double log_gamma_sample(RngState& rng, double shape) {
  if (!std::isfinite(shape) || shape < 0.0) {
    throw std::invalid_argument("gamma_sample: shape must be finite and >= 0");
  }
  if (shape == 0.0) return -std::numeric_limits<double>::infinity();
  double boost = 0.0;
  if (shape < 1.0) {
    boost = std::log(rng.uniform_open()) / shape;
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return std::log(d * v) + boost;
    }
  }
}

/// Exact Gamma(shape, 1) draw; shape 0 gives the constant 0.
inline double gamma_sample(RngState& rng, double shape) {
  if (!(shape > 0.0)) {
    if (shape == 0.0) return 0.0;
    throw std::invalid_argument("gamma_sample: shape must be > 0");
  }
  return std::exp(log_gamma_sample(rng, shape));
}

/// Draws (x, y) pairs of one family from its gamma-ratio construction.
class PairSampler {
 public:
  explicit PairSampler(const FamilySpec& family) {
    const auto layout = family.layout();
    count_ = layout.shapes.size();
    std::copy(layout.shapes.begin(), layout.shapes.end(), shapes_.begin());
    x_ = layout.x;
    y_ = layout.y;
  }

  std::pair<double, double> operator()(RngState& rng) const {
    std::array<double, 8> logs{};
    for (std::size_t i = 0; i < count_; ++i) logs[i] = log_gamma_sample(rng, shapes_[i]);
    return {ratio(logs, x_), ratio(logs, y_)};
  }

 private:
  double log_sum(const std::array<double, 8>& logs, std::uint32_t mask) const {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count_; ++i) {
      if ((mask & (1u << i)) && logs[i] > hi) hi = logs[i];
    }
    if (std::isinf(hi)) return hi;
    double s = 0.0;
    for (std::size_t i = 0; i < count_; ++i) {
      if (mask & (1u << i)) s += std::exp(logs[i] - hi);
    }
    return hi + std::log(s);
  }

  // num / (num + den) = 1 / (1 + exp(log den - log num))
  double ratio(const std::array<double, 8>& logs, RatioCoordinate c) const {
    return 1.0 / (1.0 + std::exp(log_sum(logs, c.denominator) - log_sum(logs, c.numerator)));
  }

  std::array<double, 8> shapes_{};
  std::size_t count_ = 0;
  RatioCoordinate x_;
  RatioCoordinate y_;
};

inline std::pair<double, double> sample_pair(RngState& rng, const FamilySpec& family) {
  return PairSampler(family)(rng);
}

/// Monte Carlo moments of a pair.
struct MomentEstimate {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;  ///< unbiased sample variance
  double var_y = 0.0;
  double correlation = 0.0;
  double std_error_corr = 0.0;  ///< (1 - r^2) / sqrt(n)
  std::uint64_t n_samples = 0;
  double mean_xy = 0.0;  ///< direct sample mean of x * y
  double central4_x = 0.0;
  double central4_y = 0.0;

  [[nodiscard]] double std_error_mean_x() const { return std::sqrt(var_x / static_cast<double>(n_samples)); }
  [[nodiscard]] double std_error_mean_y() const { return std::sqrt(var_y / static_cast<double>(n_samples)); }
  [[nodiscard]] double std_error_var_x() const {
    return std::sqrt(std::max(0.0, central4_x - var_x * var_x) / static_cast<double>(n_samples));
  }
  [[nodiscard]] double std_error_var_y() const {
    return std::sqrt(std::max(0.0, central4_y - var_y * var_y) / static_cast<double>(n_samples));
  }
};

/// Shifted power sums; merging is plain addition, so shard order fixes the result.
class MomentAccumulator {
 public:
  MomentAccumulator(double shift_x, double shift_y) : shift_x_(shift_x), shift_y_(shift_y) {}

  void add(double x, double y) noexcept {
    const double dx = x - shift_x_;
    const double dy = y - shift_y_;
    const double dx2 = dx * dx;
    const double dy2 = dy * dy;
    ++n_;
    sx_[0] += dx;
    sx_[1] += dx2;
    sx_[2] += dx2 * dx;
    sx_[3] += dx2 * dx2;
    sy_[0] += dy;
    sy_[1] += dy2;
    sy_[2] += dy2 * dy;
    sy_[3] += dy2 * dy2;
    sxy_ += dx * dy;
    raw_xy_ += x * y;
  }

  void merge(const MomentAccumulator& o) noexcept {
    n_ += o.n_;
    for (int k = 0; k < 4; ++k) {
      sx_[k] += o.sx_[k];
      sy_[k] += o.sy_[k];
    }
    sxy_ += o.sxy_;
    raw_xy_ += o.raw_xy_;
  }

  [[nodiscard]] MomentEstimate result() const {
    if (n_ < 2) throw std::invalid_argument("estimate_moments: need at least 2 samples");
    const double n = static_cast<double>(n_);
    const double mx = sx_[0] / n;
    const double my = sy_[0] / n;
    MomentEstimate e;
    e.n_samples = n_;
    e.mean_x = shift_x_ + mx;
    e.mean_y = shift_y_ + my;
    e.var_x = (sx_[1] - sx_[0] * mx) / (n - 1.0);
    e.var_y = (sy_[1] - sy_[0] * my) / (n - 1.0);
    const double cov = (sxy_ - sx_[0] * my) / (n - 1.0);
    const double denom = std::sqrt(e.var_x * e.var_y);
    e.correlation = denom > 0.0 ? std::clamp(cov / denom, -1.0, 1.0) : 0.0;
    e.std_error_corr = (1.0 - e.correlation * e.correlation) / std::sqrt(n);
    e.mean_xy = raw_xy_ / n;
    e.central4_x = central4(sx_, n);
    e.central4_y = central4(sy_, n);
    return e;
  }

 private:
  static double central4(const std::array<double, 4>& s, double n) {
    const double m = s[0] / n;
    const double m2 = m * m;
    return s[3] / n - 4.0 * m * s[2] / n + 6.0 * m2 * s[1] / n - 3.0 * m2 * m2;
  }

  double shift_x_;
  double shift_y_;
  std::uint64_t n_ = 0;
  std::array<double, 4> sx_{};
  std::array<double, 4> sy_{};
  double sxy_ = 0.0;
  double raw_xy_ = 0.0;
};

namespace detail {

/// Fixed shard count: results depend on (seed, stream) only, never on the host.
inline constexpr std::uint64_t kShards = 8;
inline constexpr std::uint64_t kThreadingThreshold = 200000;

inline std::uint64_t shard_size(std::uint64_t n, std::uint64_t shard) {
  return n / kShards + (shard < n % kShards ? 1 : 0);
}

/// Runs body(shard, shard_rng, shard_n) for every shard, threaded for large n.
template <class Body>
void for_each_shard(std::uint64_t n, const RngState& rng, Body&& body) {
  if (n < kThreadingThreshold || std::thread::hardware_concurrency() <= 1) {
    for (std::uint64_t s = 0; s < kShards; ++s) body(s, rng.substream(s), shard_size(n, s));
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(kShards);
  for (std::uint64_t s = 0; s < kShards; ++s) {
    workers.emplace_back([&body, &rng, n, s] { body(s, rng.substream(s), shard_size(n, s)); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace detail

/// Means, variances and Pearson correlation of n_samples draws.
/// The result depends only on (family, n_samples, rng.seed(), rng.stream()).
inline MomentEstimate estimate_moments(const FamilySpec& family, std::uint64_t n_samples, const RngState& rng) {
  if (n_samples < 2) throw std::invalid_argument("estimate_moments: n_samples must be >= 2");
  const auto [mx, my] = marginal_params(family);
  const PairSampler sampler(family);
  std::vector<MomentAccumulator> parts(detail::kShards, MomentAccumulator(mx.mean(), my.mean()));
  detail::for_each_shard(n_samples, rng, [&](std::uint64_t s, RngState local, std::uint64_t count) {
    auto& acc = parts[s];
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto [x, y] = sampler(local);
      acc.add(x, y);
    }
  });
  MomentAccumulator total(mx.mean(), my.mean());
  for (const auto& p : parts) total.merge(p);
  return total.result();
}

}  // namespace bivbeta

#endif  // BIVBETA_SAMPLING_HPP
