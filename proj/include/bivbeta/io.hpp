#ifndef BIVBETA_IO_HPP
#define BIVBETA_IO_HPP

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bivbeta/closure.hpp"
#include "bivbeta/density.hpp"
#include "bivbeta/diagnostic.hpp"
#include "bivbeta/family.hpp"
#include "bivbeta/survivability.hpp"
#include "bivbeta/synthetic.hpp"

// CSV: header row, comma separated, '.' decimal point, 12 significant digits.
// JSON: one object {"meta": {...}, "data": {...}}.

namespace bivbeta::io {

inline constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_pairs_csv(std::ostream& os, std::span<const std::pair<double, double>> pairs) {
  os << "x,y\n";
  for (const auto& [x, y] : pairs) os << format_number(x) << ',' << format_number(y) << '\n';
}

/// m x m matrix, row i = first-coordinate cell i; the header names the
/// second-coordinate midpoints.
inline void write_matrix_csv(std::ostream& os, std::size_t m, std::span<const double> cells) {
  for (std::size_t j = 0; j < m; ++j) os << (j ? "," : "") << format_number(grid_midpoint(j, m));
  os << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) os << (j ? "," : "") << format_number(cells[i * m + j]);
    os << '\n';
  }
}

inline void write_marginal_csv(std::ostream& os, std::span<const double> axis, std::span<const double> probs) {
  os << "coordinate,probability\n";
  for (std::size_t i = 0; i < axis.size(); ++i) os << format_number(axis[i]) << ',' << format_number(probs[i]) << '\n';
}

inline json matrix_json(std::size_t m, std::span<const double> cells) {
  json rows = json::array();
  for (std::size_t i = 0; i < m; ++i) rows.push_back(std::vector<double>(cells.begin() + i * m, cells.begin() + (i + 1) * m));
  return rows;
}

inline json family_json(const FamilySpec& f) {
  return {{"variant", std::string(f.name())}, {"parameters", f.parameters()}};
}

inline json to_json(const DensityGrid& g) {
  return {{"meta",
           {{"variant", std::string(g.family.name())},
            {"alphas", g.family.parameters()},
            {"m", g.m},
            {"n_samples", g.n_samples},
            {"seed", g.seed},
            {"stream", g.stream},
            {"estimated", g.estimated},
            {"raw_midpoint_mass", g.raw_mass},
            {"version", kVersion}}},
          {"data", {{"cells", matrix_json(g.m, g.cells)}}}};
}

inline json to_json(const DiagnosticData& d) { return {{"n", d.n}, {"n1", d.n1}, {"k1", d.k1}, {"k2", d.k2}}; }

inline DiagnosticData diagnostic_data_from_json(const json& j) {
  DiagnosticData d{j.at("n").get<std::uint64_t>(), j.at("n1").get<std::uint64_t>(), j.at("k1").get<std::uint64_t>(),
                   j.at("k2").get<std::uint64_t>()};
  d.validate();
  return d;
}

inline json to_json(const PosteriorSummary& s) {
  return {{"mean_eta", s.mean_eta},   {"mean_theta", s.mean_theta}, {"sd_eta", s.sd_eta},
          {"sd_theta", s.sd_theta},   {"mode_cell", {s.mode_i, s.mode_j}},
          {"mode_eta", s.mode_eta},   {"mode_theta", s.mode_theta}, {"correlation", s.correlation}};
}

inline json to_json(const GridPosterior& gp) {
  json meta = {{"m", gp.m},
               {"data", to_json(gp.data)},
               {"seed", gp.seed},
               {"pi_posterior", {gp.pi_posterior.a, gp.pi_posterior.b}},
               {"version", kVersion}};
  if (gp.prior) {
    meta["prior"] = {{"eta_theta", family_json(gp.prior->eta_theta)},
                     {"pi", {gp.prior->pi_prior.a, gp.prior->pi_prior.b}}};
  }
  return {{"meta", meta},
          {"data",
           {{"eta_axis", gp.eta_axis}, {"theta_axis", gp.theta_axis}, {"weights", matrix_json(gp.m, gp.weights)}}}};
}

inline json to_json(const MomentEstimate& e) {
  return {{"mean_x", e.mean_x},           {"mean_y", e.mean_y},
          {"var_x", e.var_x},             {"var_y", e.var_y},
          {"correlation", e.correlation}, {"std_error_corr", e.std_error_corr},
          {"n_samples", e.n_samples}};
}

inline const char* coordinate_name(Coordinate c) {
  switch (c) {
    case Coordinate::x: return "x";
    case Coordinate::y: return "y";
    case Coordinate::both: return "both";
  }
  return "?";
}

inline json to_json(const ClosureReport& r) {
  json data = {{"closed", r.closed()}, {"pass", r.pass()}, {"message", r.message}};
  if (r.complemented) data["complemented"] = family_json(*r.complemented);
  if (r.transformed_original) data["transformed_original"] = to_json(*r.transformed_original);
  if (r.complemented_moments) data["complemented_moments"] = to_json(*r.complemented_moments);
  if (r.comparison) {
    data["z"] = r.comparison->z;
    data["max_abs_z"] = r.comparison->max_abs_z();
  }
  return {{"meta", {{"family", family_json(r.original)}, {"which", coordinate_name(r.which)}, {"version", kVersion}}},
          {"data", data}};
}

/// Paper column order (parameters, E, V[, rho], series survivability) plus method and std error.
inline void write_table_csv(std::ostream& os, SurvivabilityTable table, std::span<const TableRow> rows) {
  const bool has_rho = table != SurvivabilityTable::table4;
  os << (has_rho ? "distribution,component_survivability,variance,correlation,series_survivability,method,std_error\n"
                 : "alpha_beta,component_survivability,variance,series_survivability,method,std_error\n");
  for (const auto& row : rows) {
    const auto& r = row.report;
    const double e = row.component == 1 ? r.component_survivability.first : r.component_survivability.second;
    const double v = row.component == 1 ? r.variances.first : r.variances.second;
    os << '"' << row.label << '"' << ',' << format_number(e) << ',' << format_number(v) << ',';
    if (has_rho) os << format_number(r.correlation) << ',';
    os << format_number(r.system_survivability) << ',' << method_name(r.method) << ','
       << format_number(r.correlation_std_error) << '\n';
  }
}

}  // namespace bivbeta::io

#endif  // BIVBETA_IO_HPP
