#ifndef BIVBETA_SURVIVABILITY_HPP
#define BIVBETA_SURVIVABILITY_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bivbeta/family.hpp"
#include "bivbeta/rng.hpp"
#include "bivbeta/sampling.hpp"
#include "bivbeta/special_functions.hpp"

// Two components with survival propensities theta1, theta2 at a fixed mission
// time, lifetimes conditionally independent given the propensities, no repair.
//
//   series:   Pr(both survive)     = E(theta1 theta2)
//   parallel: Pr(at least one)     = 1 - E((1 - theta1)(1 - theta2))
//                                  = E(theta1) + E(theta2) - E(theta1 theta2)
//
// E(theta1 theta2) is E(theta^2) = E(theta)^2 + V(theta) for exchangeable
// lifetimes (one shared theta), E(theta1) E(theta2) for hierarchically
// independent propensities, and rho sqrt(V1 V2) + E1 E2 for interdependent
// ones, with E and V from the exact beta marginals and rho by Monte Carlo.

namespace bivbeta {

struct Exchangeable {
  BetaParams theta;
};

struct HierIndependent {
  BetaParams first;
  BetaParams second;
};

struct Interdependent {
  FamilySpec family;
};

enum class SystemKind { series, parallel };

struct SurvivabilityScenario {
  std::variant<Exchangeable, HierIndependent, Interdependent> propensities;
  SystemKind system = SystemKind::series;
};

struct MonteCarloSettings {
  std::uint64_t n_samples = 1000000;
  std::uint64_t seed = 1;
};

enum class Method { analytic, monte_carlo };

inline const char* method_name(Method m) { return m == Method::analytic ? "analytic" : "monte_carlo"; }

struct SurvivabilityReport {
  std::pair<double, double> component_survivability{};  ///< E(theta_i)
  std::pair<double, double> variances{};                ///< V(theta_i)
  double correlation = 0.0;
  double correlation_std_error = 0.0;
  double product_moment = 0.0;  ///< E(theta1 theta2)
  /// Direct Monte Carlo mean of theta1 * theta2 (interdependent only), a
  /// cross-check of the correlation route.
  std::optional<double> direct_product_moment;
  double system_survivability = 0.0;
  Method method = Method::analytic;
};

/// E(theta^2) of a beta: [ab + a^2 (a + b + 1)] / [(a + b)^2 (a + b + 1)].
inline double exchangeable_second_moment(const BetaParams& p) {
  const double s = p.a + p.b;
  return (p.a * p.b + p.a * p.a * (s + 1.0)) / (s * s * (s + 1.0));
}

inline SurvivabilityReport survivability(const SurvivabilityScenario& scenario,
                                         const std::optional<MonteCarloSettings>& mc = std::nullopt) {
  SurvivabilityReport r;
  if (const auto* ex = std::get_if<Exchangeable>(&scenario.propensities)) {
    ex->theta.validate("survivability");
    r.component_survivability = {ex->theta.mean(), ex->theta.mean()};
    r.variances = {ex->theta.variance(), ex->theta.variance()};
    r.product_moment = exchangeable_second_moment(ex->theta);
  } else if (const auto* hi = std::get_if<HierIndependent>(&scenario.propensities)) {
    hi->first.validate("survivability");
    hi->second.validate("survivability");
    r.component_survivability = {hi->first.mean(), hi->second.mean()};
    r.variances = {hi->first.variance(), hi->second.variance()};
    r.product_moment = r.component_survivability.first * r.component_survivability.second;
  } else {
    const auto& family = std::get<Interdependent>(scenario.propensities).family;
    if (!mc) throw std::invalid_argument("survivability: interdependent propensities need Monte Carlo settings");
    const auto [m1, m2] = marginal_params(family);
    r.component_survivability = {m1.mean(), m2.mean()};
    r.variances = {m1.variance(), m2.variance()};
    const auto est = estimate_moments(family, mc->n_samples, RngState(mc->seed));
    r.correlation = est.correlation;
    r.correlation_std_error = est.std_error_corr;
    r.product_moment = r.correlation * std::sqrt(r.variances.first * r.variances.second) +
                       r.component_survivability.first * r.component_survivability.second;
    r.direct_product_moment = est.mean_xy;
    r.method = Method::monte_carlo;
  }
  r.system_survivability = scenario.system == SystemKind::series
                               ? r.product_moment
                               : r.component_survivability.first + r.component_survivability.second -
                                     r.product_moment;
  return r;
}

enum class SurvivabilityTable { table4, table5, table6 };

struct TableRow {
  std::string label;         ///< e.g. "(3, 1)" or "B(3, 1)"
  std::vector<double> parameters;  ///< (alpha, beta) or the family alphas
  BetaParams marginal;       ///< marginal law of the reported component
  SurvivabilityReport report;
  int component = 1;         ///< which theta_i the E and V columns describe
};

namespace detail {

inline std::string format_shape(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline std::string beta_label(const BetaParams& p, bool with_b) {
  return std::string(with_b ? "B(" : "(") + format_shape(p.a) + ", " + format_shape(p.b) + ")";
}

}  // namespace detail

/// Rows of the series-system comparison tables.
///
/// table4: exchangeable B(alpha, beta), analytic.
/// table5: OL+ with alphas (a, a, b), so both marginals are B(a, b).
/// table6: AN5 parameter sets; the third set has unequal marginals and is
///         reported as two rows (component 1, component 2).
inline std::vector<TableRow> reproduce_table(SurvivabilityTable table, const MonteCarloSettings& mc = {}) {
  std::vector<TableRow> rows;
  switch (table) {
    case SurvivabilityTable::table4: {
      for (const BetaParams p : {BetaParams{1, 1}, BetaParams{3, 1}, BetaParams{10.1, 1}, BetaParams{3, 0.3},
                                 BetaParams{1, 0.1}}) {
        rows.push_back({detail::beta_label(p, false), {p.a, p.b}, p,
                        survivability({Exchangeable{p}, SystemKind::series}), 1});
      }
      break;
    }
    case SurvivabilityTable::table5: {
      for (const BetaParams p : {BetaParams{1, 1}, BetaParams{3, 1}, BetaParams{3, 0.3}, BetaParams{1, 0.1}}) {
        const auto family = FamilySpec::ol_plus(AlphaVector{p.a, p.a, p.b});
        rows.push_back({detail::beta_label(p, true), family.parameters(), p,
                        survivability({Interdependent{family}, SystemKind::series}, mc), 1});
      }
      break;
    }
    case SurvivabilityTable::table6: {
      const std::vector<AlphaVector> sets = {
          {10, 10, 0.1, 0.1, 10}, {10, 10, 0.1, 0.1, 1}, {5, 10, 0.1, 0.1, 0.5}};
      for (const auto& a : sets) {
        const auto family = FamilySpec::an5(a);
        const auto report = survivability({Interdependent{family}, SystemKind::series}, mc);
        const auto [m1, m2] = marginal_params(family);
        rows.push_back({detail::beta_label(m1, true), family.parameters(), m1, report, 1});
        if (!(m1 == m2)) {
          rows.push_back({detail::beta_label(m2, true), family.parameters(), m2, report, 2});
        }
      }
      break;
    }
  }
  return rows;
}

}  // namespace bivbeta

#endif  // BIVBETA_SURVIVABILITY_HPP
