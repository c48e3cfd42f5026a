// bivbeta: command-line front end for sampling, densities, grid posteriors,
// survivability tables and closure checks. Every subcommand is a pure
// function of its flags and --seed.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bivbeta/bivbeta.hpp"
#include "bivbeta/io.hpp"

namespace {

using bivbeta::io::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    double v = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (token.empty() || ec != std::errc() || ptr != last) {
      throw UsageError(std::string(flag) + ": cannot parse '" + token + "' as a number");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

bivbeta::BetaParams parse_beta(const std::string& text, const char* flag) {
  const auto v = parse_list(text, flag);
  if (v.size() != 2) throw UsageError(std::string(flag) + ": expected a,b");
  return {v[0], v[1]};
}

struct FamilyFlags {
  std::string family;
  std::string alphas;
  std::string beta1;
  std::string beta2;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "ol-plus | ol-minus | ol-minus-x | ol-star | an5 | an8 | indep")->required();
    app->add_option("--alphas", alphas, "comma-separated gamma shapes (3, 5 or 8 values)");
    app->add_option("--beta1", beta1, "first marginal a,b for --family indep");
    app->add_option("--beta2", beta2, "second marginal a,b for --family indep");
  }

  [[nodiscard]] bivbeta::FamilySpec build() const {
    const auto kind = bivbeta::FamilySpec::parse_kind(family);
    if (!kind) throw UsageError("--family: unknown family '" + family + "'");
    if (*kind == bivbeta::FamilyKind::IndependentBetas) {
      if (beta1.empty() || beta2.empty()) throw UsageError("--family indep needs --beta1 a,b and --beta2 a,b");
      return bivbeta::FamilySpec::independent(parse_beta(beta1, "--beta1"), parse_beta(beta2, "--beta2"));
    }
    if (alphas.empty()) throw UsageError("--family " + family + " needs --alphas");
    return {*kind, bivbeta::AlphaVector(parse_list(alphas, "--alphas"))};
  }
};

/// Writes to --out, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void write_json(const std::string& path, const json& j) {
  Output out(path);
  out.stream() << j.dump(2) << '\n';
}

bivbeta::Coordinate parse_which(const std::string& s) {
  if (s == "x") return bivbeta::Coordinate::x;
  if (s == "y") return bivbeta::Coordinate::y;
  if (s == "both") return bivbeta::Coordinate::both;
  throw UsageError("--which: expected x, y or both");
}

/// Expands --config file.json into trailing "--key value" arguments. Options
/// take their last occurrence, so config values override flags.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw UsageError(std::string("--config: invalid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw UsageError("--config: top level must be an object");
  for (const auto& [key, value] : cfg.items()) {
    std::string text;
    if (value.is_array()) {
      for (std::size_t k = 0; k < value.size(); ++k) {
        text += (k ? "," : "") + (value[k].is_string() ? value[k].get<std::string>() : value[k].dump());
      }
    } else if (value.is_string()) {
      text = value.get<std::string>();
    } else {
      text = value.dump();
    }
    args.push_back("--" + key);
    args.push_back(text);
  }
  return args;
}

int run(int argc, char** argv) {
  CLI::App app{"Bivariate beta families, diagnostic-test posteriors and two-component survivability"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;

  // sample
  auto* sample = app.add_subcommand("sample", "draw pairs from a bivariate family (CSV x,y)");
  FamilyFlags sample_family;
  std::uint64_t sample_n = 1000;
  std::uint64_t sample_seed = 1;
  std::string sample_out = "-";
  sample_family.attach(sample);
  sample->add_option("--n", sample_n, "number of pairs");
  sample->add_option("--seed", sample_seed, "random seed");
  sample->add_option("--out", sample_out, "output path ('-' for stdout)");
  sample->add_option("--config", config_path, "JSON file of flag values");

  // density
  auto* density = app.add_subcommand("density", "joint density on the m x m midpoint grid");
  FamilyFlags density_family;
  std::size_t density_m = bivbeta::kDefaultGridSize;
  std::uint64_t density_samples = bivbeta::kDefaultHistogramSamples;
  std::uint64_t density_seed = 1;
  std::string density_out = "-";
  std::string density_format = "csv";
  density_family.attach(density);
  density->add_option("--m", density_m, "grid resolution");
  density->add_option("--mc-samples", density_samples, "histogram draws for an5/an8");
  density->add_option("--seed", density_seed, "random seed");
  density->add_option("--out", density_out, "output path");
  density->add_option("--format", density_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  density->add_option("--config", config_path, "JSON file of flag values");

  // posterior
  auto* posterior = app.add_subcommand("posterior", "grid posterior of (sensitivity, specificity)");
  FamilyFlags prior_family;
  std::string data_text;
  std::uint64_t synth_n = 0;
  bivbeta::SynthConfig synth;
  std::string pi_prior_text = "1,1";
  std::size_t posterior_m = bivbeta::kDefaultGridSize;
  std::uint64_t posterior_samples = bivbeta::kDefaultHistogramSamples;
  std::uint64_t posterior_seed = 1;
  std::optional<std::uint64_t> synth_seed;
  std::optional<double> pi_star;
  std::string posterior_out = "-";
  std::string grid_out;
  std::string grid_format = "csv";
  std::string marginals_out;
  prior_family.attach(posterior);
  posterior->add_option("--data", data_text, "observed counts n,n1,k1,k2");
  posterior->add_option("--synth-n", synth_n, "generate data with this n instead of --data");
  posterior->add_option("--pi", synth.pi, "synthetic prevalence");
  posterior->add_option("--mu0", synth.mu0, "synthetic healthy mean");
  posterior->add_option("--mu1", synth.mu1, "synthetic diseased mean");
  posterior->add_option("--t", synth.t, "synthetic threshold");
  posterior->add_option("--synth-seed", synth_seed, "seed of the synthetic data (default: --seed)");
  posterior->add_option("--pi-prior", pi_prior_text, "beta prior a,b on prevalence");
  posterior->add_option("--pi-star", pi_star, "prevalence used for predictive values (default: posterior mean)");
  posterior->add_option("--m", posterior_m, "grid resolution");
  posterior->add_option("--mc-samples", posterior_samples, "histogram draws for an5/an8 priors");
  posterior->add_option("--seed", posterior_seed, "random seed of the prior grid");
  posterior->add_option("--out", posterior_out, "summary JSON path");
  posterior->add_option("--grid-out", grid_out, "posterior weights path");
  posterior->add_option("--grid-format", grid_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  posterior->add_option("--marginals-out", marginals_out, "prefix for <prefix>_eta.csv and <prefix>_theta.csv");
  posterior->add_option("--config", config_path, "JSON file of flag values");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic confirmatory/screening counts (JSON)");
  bivbeta::SynthConfig synth_only;
  std::string synth_out = "-";
  synth_cmd->add_option("--pi", synth_only.pi, "prevalence");
  synth_cmd->add_option("--n", synth_only.n, "subjects");
  synth_cmd->add_option("--mu0", synth_only.mu0, "healthy mean");
  synth_cmd->add_option("--mu1", synth_only.mu1, "diseased mean");
  synth_cmd->add_option("--t", synth_only.t, "threshold");
  synth_cmd->add_option("--seed", synth_only.seed, "random seed");
  synth_cmd->add_option("--out", synth_out, "output path");
  synth_cmd->add_option("--config", config_path, "JSON file of flag values");

  // tables
  auto* tables = app.add_subcommand("tables", "series-system survivability tables (CSV)");
  int table_id = 4;
  std::uint64_t table_samples = 1000000;
  std::uint64_t table_seed = 1;
  std::string table_out = "-";
  tables->add_option("--table", table_id, "4, 5 or 6")->required()->check(CLI::IsMember({4, 5, 6}));
  tables->add_option("--mc-samples", table_samples, "draws for the correlation estimates");
  tables->add_option("--seed", table_seed, "random seed");
  tables->add_option("--out", table_out, "output path");
  tables->add_option("--config", config_path, "JSON file of flag values");

  // closure-check
  auto* closure = app.add_subcommand("closure-check", "complement a family and test equality in law");
  FamilyFlags closure_family;
  std::string which = "y";
  std::uint64_t closure_samples = 1000000;
  std::uint64_t closure_seed = 1;
  std::string closure_out = "-";
  closure_family.attach(closure);
  closure->add_option("--which", which, "x | y | both")->check(CLI::IsMember({"x", "y", "both"}));
  closure->add_option("--mc-samples", closure_samples, "draws per side");
  closure->add_option("--seed", closure_seed, "random seed");
  closure->add_option("--out", closure_out, "output path");
  closure->add_option("--config", config_path, "JSON file of flag values");

  auto args = expand_config(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (sample->parsed()) {
    const auto family = sample_family.build();
    const bivbeta::PairSampler sampler(family);
    bivbeta::RngState rng(sample_seed);
    Output out(sample_out);
    out.stream() << "x,y\n";
    for (std::uint64_t i = 0; i < sample_n; ++i) {
      const auto [x, y] = sampler(rng);
      out.stream() << bivbeta::io::format_number(x) << ',' << bivbeta::io::format_number(y) << '\n';
    }
  } else if (density->parsed()) {
    const auto family = density_family.build();
    const auto grid = bivbeta::density_grid(family, density_m, density_samples, bivbeta::RngState(density_seed));
    if (density_format == "json") {
      write_json(density_out, bivbeta::io::to_json(grid));
    } else {
      Output out(density_out);
      bivbeta::io::write_matrix_csv(out.stream(), grid.m, grid.cells);
    }
  } else if (posterior->parsed()) {
    const auto family = prior_family.build();
    bivbeta::DiagnosticData data;
    json data_meta;
    if (!data_text.empty() && synth_n > 0) throw UsageError("give either --data or --synth-n, not both");
    if (!data_text.empty()) {
      const auto v = parse_list(data_text, "--data");
      if (v.size() != 4) throw UsageError("--data: expected n,n1,k1,k2");
      for (double x : v) {
        if (x < 0 || x != static_cast<double>(static_cast<std::uint64_t>(x))) {
          throw UsageError("--data: counts must be nonnegative integers");
        }
      }
      data = {static_cast<std::uint64_t>(v[0]), static_cast<std::uint64_t>(v[1]), static_cast<std::uint64_t>(v[2]),
              static_cast<std::uint64_t>(v[3])};
      data.validate();
      data_meta = {{"source", "observed"}};
    } else if (synth_n > 0) {
      synth.n = synth_n;
      synth.seed = synth_seed.value_or(posterior_seed);
      data = bivbeta::generate(synth);
      const auto [eta, theta] = bivbeta::true_params(synth);
      data_meta = {{"source", "synthetic"}, {"pi", synth.pi}, {"mu0", synth.mu0}, {"mu1", synth.mu1},
                   {"t", synth.t},          {"seed", synth.seed}, {"true_eta", eta}, {"true_theta", theta}};
    } else {
      throw UsageError("posterior needs --data n,n1,k1,k2 or --synth-n");
    }
    const bivbeta::PriorSpec prior{family, parse_beta(pi_prior_text, "--pi-prior")};
    prior.pi_prior.validate("--pi-prior");
    const auto gp =
        bivbeta::joint_posterior(data, prior, posterior_m, bivbeta::RngState(posterior_seed), nullptr, posterior_samples);
    const auto summary = bivbeta::posterior_summary(gp);
    const double star = pi_star.value_or(gp.pi_posterior.mean());
    const auto predictive = bivbeta::predictive_propensity(gp, star);
    json doc = {{"meta",
                 {{"version", bivbeta::io::kVersion},
                  {"seed", posterior_seed},
                  {"m", posterior_m},
                  {"mc_samples", family.has_closed_form() ? 0 : posterior_samples},
                  {"prior", {{"eta_theta", bivbeta::io::family_json(family)}, {"pi", {prior.pi_prior.a, prior.pi_prior.b}}}},
                  {"data_source", data_meta}}},
                {"data",
                 {{"counts", bivbeta::io::to_json(data)},
                  {"summary", bivbeta::io::to_json(summary)},
                  {"pi_posterior", {{"a", gp.pi_posterior.a}, {"b", gp.pi_posterior.b}, {"mean", gp.pi_posterior.mean()}}},
                  {"predictive", {{"pi_star", star}, {"positive", predictive.positive}, {"negative", predictive.negative}}}}}};
    write_json(posterior_out, doc);
    if (!grid_out.empty()) {
      if (grid_format == "json") {
        write_json(grid_out, bivbeta::io::to_json(gp));
      } else {
        Output out(grid_out);
        bivbeta::io::write_matrix_csv(out.stream(), gp.m, gp.weights);
      }
    }
    if (!marginals_out.empty()) {
      Output eta_out(marginals_out + "_eta.csv");
      bivbeta::io::write_marginal_csv(eta_out.stream(), gp.eta_axis,
                                      bivbeta::marginal_posterior(gp, bivbeta::PosteriorAxis::eta));
      Output theta_out(marginals_out + "_theta.csv");
      bivbeta::io::write_marginal_csv(theta_out.stream(), gp.theta_axis,
                                      bivbeta::marginal_posterior(gp, bivbeta::PosteriorAxis::theta));
    }
  } else if (synth_cmd->parsed()) {
    const auto data = bivbeta::generate(synth_only);
    const auto [eta, theta] = bivbeta::true_params(synth_only);
    json naive = nullptr;
    if (data.n1 > 0 && data.n1 < data.n) {
      const auto est = bivbeta::naive_estimates(data);
      naive = {{"eta", est.eta}, {"theta", est.theta}, {"pi", est.pi}};
    }
    write_json(synth_out, {{"meta",
                            {{"version", bivbeta::io::kVersion},
                             {"config",
                              {{"pi", synth_only.pi}, {"n", synth_only.n}, {"mu0", synth_only.mu0},
                               {"mu1", synth_only.mu1}, {"t", synth_only.t}, {"seed", synth_only.seed}}},
                             {"true_eta", eta},
                             {"true_theta", theta}}},
                           {"data", {{"counts", bivbeta::io::to_json(data)}, {"naive", naive}}}});
  } else if (tables->parsed()) {
    const auto id = table_id == 4   ? bivbeta::SurvivabilityTable::table4
                    : table_id == 5 ? bivbeta::SurvivabilityTable::table5
                                    : bivbeta::SurvivabilityTable::table6;
    const auto rows = bivbeta::reproduce_table(id, {table_samples, table_seed});
    Output out(table_out);
    bivbeta::io::write_table_csv(out.stream(), id, rows);
  } else if (closure->parsed()) {
    const auto family = closure_family.build();
    const auto report =
        bivbeta::closure_check(family, parse_which(which), closure_samples, bivbeta::RngState(closure_seed));
    write_json(closure_out, bivbeta::io::to_json(report));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "error: " << msg << '\n';
    return 2;
  }
}
