#ifndef BIVBETA_CLOSURE_HPP
#define BIVBETA_CLOSURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "bivbeta/family.hpp"
#include "bivbeta/sampling.hpp"

namespace bivbeta {

/// Moments of the pair after complementing coordinates (exact algebra on the estimates).
inline MomentEstimate complement_moments(MomentEstimate e, Coordinate which) {
  const bool fx = which == Coordinate::x || which == Coordinate::both;
  const bool fy = which == Coordinate::y || which == Coordinate::both;
  if (fx) e.mean_x = 1.0 - e.mean_x;
  if (fy) e.mean_y = 1.0 - e.mean_y;
  if (fx != fy) e.correlation = -e.correlation;
  // E[x'y'] follows from the covariance; var and fourth central moments are unchanged.
  const double n = static_cast<double>(e.n_samples);
  const double cov = e.correlation * std::sqrt(e.var_x * e.var_y) * (n - 1.0) / n;
  e.mean_xy = cov + e.mean_x * e.mean_y;
  return e;
}

/// Two-sample z-statistics for means, variances and correlation.
struct LawComparison {
  std::array<double, 5> z{};  ///< mean_x, mean_y, var_x, var_y, correlation
  double z_limit = 4.0;

  [[nodiscard]] double max_abs_z() const {
    double m = 0.0;
    for (double v : z) m = std::max(m, std::abs(v));
    return m;
  }
  [[nodiscard]] bool pass() const { return max_abs_z() <= z_limit; }
};

inline LawComparison compare_moments(const MomentEstimate& a, const MomentEstimate& b, double z_limit = 4.0) {
  auto z = [](double va, double vb, double sa, double sb) {
    const double se = std::sqrt(sa * sa + sb * sb);
    return se > 0.0 ? (va - vb) / se : (va == vb ? 0.0 : std::numeric_limits<double>::infinity());
  };
  LawComparison c;
  c.z_limit = z_limit;
  c.z = {z(a.mean_x, b.mean_x, a.std_error_mean_x(), b.std_error_mean_x()),
         z(a.mean_y, b.mean_y, a.std_error_mean_y(), b.std_error_mean_y()),
         z(a.var_x, b.var_x, a.std_error_var_x(), b.std_error_var_x()),
         z(a.var_y, b.var_y, a.std_error_var_y(), b.std_error_var_y()),
         z(a.correlation, b.correlation, a.std_error_corr, b.std_error_corr)};
  return c;
}

struct ClosureReport {
  FamilySpec original;
  Coordinate which;
  std::optional<FamilySpec> complemented;  ///< empty when the family is not closed
  std::optional<MomentEstimate> transformed_original;
  std::optional<MomentEstimate> complemented_moments;
  std::optional<LawComparison> comparison;
  std::string message;

  [[nodiscard]] bool closed() const { return complemented.has_value(); }
  [[nodiscard]] bool pass() const { return closed() && (!comparison || comparison->pass()); }
};

/// complement() plus a moment-based check that the returned spec has the law of
/// the complemented draws of the original (independent substreams 1 and 2).
inline ClosureReport closure_check(const FamilySpec& family, Coordinate which, std::uint64_t n_samples,
                                   const RngState& rng) {
  ClosureReport report{family, which, std::nullopt, std::nullopt, std::nullopt, std::nullopt, {}};
  try {
    report.complemented = complement(family, which);
  } catch (const NotClosedError& e) {
    report.message = e.what();
    return report;
  }
  const auto original = complement_moments(estimate_moments(family, n_samples, rng.substream(1)), which);
  const auto relabelled = estimate_moments(*report.complemented, n_samples, rng.substream(2));
  report.transformed_original = original;
  report.complemented_moments = relabelled;
  report.comparison = compare_moments(original, relabelled);
  report.message = report.comparison->pass() ? "equal in law at 4 standard errors"
                                             : "moment mismatch beyond 4 standard errors";
  return report;
}

}  // namespace bivbeta

#endif  // BIVBETA_CLOSURE_HPP
