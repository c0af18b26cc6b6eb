// Command-line surface for the overlap measures library.
//
// Subcommands: normal, curve, samples, trial, sets. JSON reports on stdout
// (CSV for curve), diagnostics on stderr. Exit codes: 0 success, 2 usage
// error, 3 data error, 4 numerical-integrity error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "overlap/bounds.hpp"
#include "overlap/crossmatch.hpp"
#include "overlap/density.hpp"
#include "overlap/measures.hpp"
#include "overlap/sets.hpp"
#include "overlap/trial.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

class data_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Round to 10 significant digits so reports serialize identically across
// runs and platforms.
double sig10(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::strtod(buf, nullptr);
}

json estimate_json(const overlap::OverlapEstimate& e) {
  json j;
  j["measure"] = overlap::to_string(e.measure);
  j["method"] = overlap::to_string(e.method);
  j["value"] = sig10(e.value);
  j["std_error"] = sig10(e.std_error);
  j["n_points"] = e.n_points;
  if (e.seed) j["seed"] = *e.seed;
  if (e.degenerate_support) j["degenerate_support"] = true;
  if (e.skipped_points > 0) j["skipped_points"] = e.skipped_points;
  return j;
}

json bounds_json(const overlap::BoundsReport& r) {
  json j;
  j["hellinger_sq"] = sig10(r.hellinger_sq);
  j["d_om"] = sig10(r.d_om);
  j["ovl"] = sig10(r.ovl);
  j["om"] = sig10(r.om);
  j["bhattacharyya"] = sig10(r.bhattacharyya);
  json checks = json::array();
  for (const auto& c : r.checks) {
    json cj;
    cj["name"] = c.name;
    cj["lhs"] = sig10(c.lhs);
    cj["rhs"] = sig10(c.rhs);
    cj["satisfied"] = c.satisfied;
    cj["slack"] = sig10(c.slack);
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j;
}

void emit(const std::string& command, const json& inputs, const json& results,
          const std::vector<std::string>& warnings) {
  json report;
  report["command"] = command;
  report["inputs"] = inputs;
  report["results"] = results;
  report["warnings"] = warnings;
  report["version"] = kVersion;
  std::cout << report.dump(2) << "\n";
}

// Single-column CSV of finite reals; commas or newlines separate values,
// blank lines are skipped, an optional non-numeric header row is allowed.
std::vector<double> read_csv_column(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw data_error("cannot open file: " + path);
  std::vector<double> out;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      std::string tok = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
      start = end == std::string::npos ? line.size() + 1 : end + 1;
      // trim
      while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.erase(tok.begin());
      while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
      if (tok.empty()) continue;
      char* endp = nullptr;
      const double v = std::strtod(tok.c_str(), &endp);
      if (endp == tok.c_str() || *endp != '\0') {
        if (row == 1 && out.empty()) continue; // header
        throw data_error(path + ": non-numeric value '" + tok + "' at row " + std::to_string(row));
      }
      if (!std::isfinite(v))
        throw data_error(path + ": non-finite value at row " + std::to_string(row));
      out.push_back(v);
    }
  }
  return out;
}

std::vector<std::string> read_token_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw data_error("cannot open file: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

json trial_decision_json(const overlap::TrialDecision& d) {
  json j;
  j["xbar"] = sig10(d.xbar);
  j["critical_value"] = sig10(d.critical_value);
  j["p_value"] = sig10(d.p_value);
  j["reject_h0"] = d.reject_h0;
  j["q_at_estimate"] = sig10(d.q_at_estimate);
  j["theta_threshold_for_q0"] = sig10(d.theta_threshold_for_q0);
  j["q_rule_accepts_new"] = d.q_rule_accepts_new;
  j["p_value_vs_threshold"] = sig10(d.p_value_vs_threshold);
  return j;
}

struct NormalArgs {
  double theta = 0.0;
  double sigma = 1.0;
  Eigen::Index n_grid = 801;
  Eigen::Index n_grid_1d = 2001;
  Eigen::Index n_draws = 100000;
  std::uint64_t seed = 12345;
};

int run_normal(const NormalArgs& a) {
  const auto p0 = overlap::normal_density(0.0, a.sigma);
  const auto p1 = overlap::normal_density(a.theta, a.sigma);
  json results;
  json om;
  om["closed_form"] = estimate_json(overlap::q_normal_closed_form(a.theta, a.sigma));
  om["quadrature"] = estimate_json(overlap::om_quadrature(p0, p1, a.n_grid));
  om["monte_carlo"] = estimate_json(overlap::om_monte_carlo(p0, p1, a.n_draws, a.seed));
  results["om"] = om;
  results["ovl"] = estimate_json(overlap::ovl_quadrature(p0, p1, a.n_grid_1d));
  json ob;
  ob["quadrature"] = estimate_json(overlap::ob_quadrature(p0, p1, a.n_grid));
  ob["monte_carlo"] = estimate_json(overlap::ob_monte_carlo(p0, p1, a.n_draws, a.seed));
  results["ob"] = ob;
  results["oc"] = estimate_json(overlap::oc_quadrature(p0, p1, a.n_grid_1d));
  results["bounds"] = bounds_json(overlap::bounds_report(p0, p1, a.n_grid, a.n_grid_1d));

  json inputs;
  inputs["theta"] = sig10(a.theta);
  inputs["sigma"] = sig10(a.sigma);
  inputs["n_grid"] = a.n_grid;
  inputs["n_grid_1d"] = a.n_grid_1d;
  inputs["n_draws"] = a.n_draws;
  inputs["seed"] = a.seed;
  emit("normal", inputs, results, {});
  return 0;
}

struct CurveArgs {
  double theta_min = 0.0;
  double theta_max = 0.0;
  Eigen::Index steps = 0;
  double sigma = 1.0;
};

int run_curve(const CurveArgs& a) {
  std::cout << "theta,q\n";
  for (Eigen::Index i = 0; i < a.steps; ++i) {
    const double t = a.theta_min + (a.theta_max - a.theta_min) * static_cast<double>(i) /
                                       static_cast<double>(a.steps - 1);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", t, overlap::q_normal_closed_form(t, a.sigma).value);
    std::cout << buf;
  }
  return 0;
}

struct SamplesArgs {
  std::string file0, file1;
  std::string method = "quad";
  double bandwidth0 = 0.0;
  double bandwidth1 = 0.0;
  Eigen::Index n_grid = 801;
  Eigen::Index n_grid_1d = 2001;
  Eigen::Index n_draws = 100000;
  std::uint64_t seed = 12345;
  bool literal_matrix = false;
  int exact_limit = overlap::kExactMatchingLimit;
};

int run_samples(const SamplesArgs& a) {
  const auto x = read_csv_column(a.file0);
  const auto y = read_csv_column(a.file1);
  std::vector<std::string> warnings;
  json results;

  if (a.method == "crossmatch") {
    if (x.size() < 4 || y.size() < 4)
      throw data_error("crossmatch needs at least 4 samples per file");
    auto cs = overlap::build_cross_samples(x, y);
    if (cs.truncated)
      warnings.push_back("odd sample count: last element of each input dropped");
    const auto m = overlap::distance_matrix(cs, a.literal_matrix);
    const auto match = overlap::min_weight_matching(m, a.exact_limit);
    json j;
    j["measure"] = "ob";
    j["method"] = "matching";
    j["value"] = sig10(match.statistic);
    j["statistic_raw"] = sig10(match.statistic_raw);
    j["n_cross"] = match.n_cross;
    j["total_distance"] = sig10(match.total_distance);
    j["exact"] = match.exact;
    j["n"] = static_cast<std::int64_t>(2 * cs.a_points.rows());
    results["ob"] = j;
  } else if (a.method == "quad" || a.method == "mc") {
    const auto p0 = overlap::kde_fit(x, a.bandwidth0);
    const auto p1 = overlap::kde_fit(y, a.bandwidth1);
    results["kde"] = {{"bandwidth0", sig10(p0.bandwidth())}, {"bandwidth1", sig10(p1.bandwidth())}};
    if (a.method == "mc") {
      results["om"] = estimate_json(overlap::om_monte_carlo(p0, p1, a.n_draws, a.seed));
      results["ob"] = estimate_json(overlap::ob_monte_carlo(p0, p1, a.n_draws, a.seed));
    } else {
      results["om"] = estimate_json(overlap::om_quadrature(p0, p1, a.n_grid));
      results["ob"] = estimate_json(overlap::ob_quadrature(p0, p1, a.n_grid));
    }
    results["ovl"] = estimate_json(overlap::ovl_quadrature(p0, p1, a.n_grid_1d));
    results["oc"] = estimate_json(overlap::oc_quadrature(p0, p1, a.n_grid_1d));
  } else {
    throw CLI::ValidationError("--method must be quad, mc or crossmatch");
  }

  json inputs;
  inputs["file0"] = a.file0;
  inputs["file1"] = a.file1;
  inputs["method"] = a.method;
  inputs["n0"] = static_cast<std::int64_t>(x.size());
  inputs["n1"] = static_cast<std::int64_t>(y.size());
  inputs["seed"] = a.seed;
  emit("samples", inputs, results, warnings);
  return 0;
}

struct TrialArgs {
  double xbar = 0.0;
  overlap::TrialConfig cfg;
  Eigen::Index bootstrap = 0;
  std::uint64_t seed = 12345;
  bool seed_given = false;
};

int run_trial(const TrialArgs& a) {
  json results;
  results["decision"] = trial_decision_json(overlap::decide(a.xbar, a.cfg));
  if (a.bootstrap > 0) {
    const auto s = overlap::parametric_bootstrap(a.xbar, a.cfg, a.bootstrap, a.seed);
    json bj;
    bj["b"] = s.b;
    bj["seed"] = s.seed;
    bj["quantile_05"] = sig10(s.q05);
    bj["quantile_50"] = sig10(s.q50);
    bj["quantile_95"] = sig10(s.q95);
    bj["fraction_below_q0"] = sig10(s.fraction_below_q0);
    json qt = json::array();
    for (double q : s.q_tilde) qt.push_back(sig10(q));
    bj["q_tilde"] = qt;
    results["bootstrap"] = bj;
  }
  json inputs;
  inputs["xbar"] = sig10(a.xbar);
  inputs["n"] = a.cfg.n;
  inputs["sigma"] = sig10(a.cfg.sigma);
  inputs["alpha"] = sig10(a.cfg.alpha);
  inputs["q0"] = sig10(a.cfg.q0);
  inputs["theta0"] = sig10(a.cfg.theta0);
  if (a.bootstrap > 0) {
    inputs["bootstrap"] = a.bootstrap;
    inputs["seed"] = a.seed;
  }
  emit("trial", inputs, results, {});
  return 0;
}

int run_sets(const std::string& file_a, const std::string& file_b) {
  const auto ta = read_token_lines(file_a);
  const auto tb = read_token_lines(file_b);
  overlap::FiniteSetPair p;
  p.a.insert(ta.begin(), ta.end());
  p.b.insert(tb.begin(), tb.end());
  if (p.a.empty() || p.b.empty())
    throw data_error("sets: input files must contain at least one token each");
  const double o = overlap::overlap_coefficient(p);
  const double j = overlap::jaccard(p);
  const double om = overlap::om_sets(p);
  json results;
  results["overlap_coefficient"] = sig10(o);
  results["jaccard"] = sig10(j);
  results["om"] = sig10(om);
  results["om_double_sum"] = sig10(overlap::om_sets_double_sum(p));
  results["sandwich_holds"] = (j <= om + 1e-12) && (om <= o + 1e-12);
  results["sizes"] = {{"a", p.a.size()}, {"b", p.b.size()}, {"intersection", p.intersection_size()}};
  json inputs;
  inputs["file_a"] = file_a;
  inputs["file_b"] = file_b;
  emit("sets", inputs, results, {});
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density and set overlap measures with trial decision rules"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  NormalArgs na;
  auto* normal = app.add_subcommand("normal", "Overlap suite for N(0,sigma^2) vs N(theta,sigma^2)");
  normal->add_option("--theta", na.theta, "Mean shift")->required();
  normal->add_option("--sigma", na.sigma, "Common standard deviation")->check(CLI::PositiveNumber);
  normal->add_option("--n-grid", na.n_grid, "2-D quadrature grid points per axis");
  normal->add_option("--n-grid-1d", na.n_grid_1d, "1-D quadrature grid points");
  normal->add_option("--n-draws", na.n_draws, "Monte Carlo draws");
  normal->add_option("--seed", na.seed, "Monte Carlo seed");

  CurveArgs ca;
  auto* curve = app.add_subcommand("curve", "CSV of q(theta) over a theta range");
  curve->add_option("theta_min", ca.theta_min, "Range start")->required();
  curve->add_option("theta_max", ca.theta_max, "Range end")->required();
  curve->add_option("steps", ca.steps, "Number of rows (>= 2)")->required()->check(CLI::Range(Eigen::Index{2}, Eigen::Index{100000000}));
  curve->add_option("sigma", ca.sigma, "Common standard deviation")->check(CLI::PositiveNumber);

  SamplesArgs sa;
  auto* samples = app.add_subcommand("samples", "Overlap estimates from two sample files");
  samples->add_option("file0", sa.file0, "CSV of draws from p0")->required();
  samples->add_option("file1", sa.file1, "CSV of draws from p1")->required();
  samples->add_option("--method", sa.method, "quad | mc | crossmatch")
      ->check(CLI::IsMember({"quad", "mc", "crossmatch"}));
  samples->add_option("--bandwidth0", sa.bandwidth0, "KDE bandwidth for file0 (default Silverman)");
  samples->add_option("--bandwidth1", sa.bandwidth1, "KDE bandwidth for file1 (default Silverman)");
  samples->add_option("--n-grid", sa.n_grid, "2-D quadrature grid points per axis");
  samples->add_option("--n-grid-1d", sa.n_grid_1d, "1-D quadrature grid points");
  samples->add_option("--n-draws", sa.n_draws, "Monte Carlo draws");
  samples->add_option("--seed", sa.seed, "Monte Carlo seed");
  samples->add_flag("--literal-matrix", sa.literal_matrix,
                    "Fill the A-to-B distance block as d(A_j,B_j) (column-constant variant)");
  samples->add_option("--exact-limit", sa.exact_limit, "Max n for the exact matcher");

  TrialArgs ta;
  auto* trial = app.add_subcommand("trial", "Classical test vs the q-rule for one observed mean");
  trial->add_option("--xbar", ta.xbar, "Observed sample mean")->required();
  trial->add_option("--n", ta.cfg.n, "Sample size")->required();
  trial->add_option("--sigma", ta.cfg.sigma, "Known standard deviation")->check(CLI::PositiveNumber);
  trial->add_option("--alpha", ta.cfg.alpha, "Type I error");
  trial->add_option("--q0", ta.cfg.q0, "Interchangeability threshold");
  trial->add_option("--theta0", ta.cfg.theta0, "Null mean");
  trial->add_option("--bootstrap", ta.bootstrap, "Parametric bootstrap replications");
  auto* seed_opt = trial->add_option("--seed", ta.seed, "Bootstrap seed");

  std::string sets_a, sets_b;
  auto* sets = app.add_subcommand("sets", "Finite-set overlap measures");
  sets->add_option("file_a", sets_a, "Newline-delimited tokens")->required();
  sets->add_option("file_b", sets_b, "Newline-delimited tokens")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*normal) return run_normal(na);
    if (*curve) {
      if (!(ca.theta_min < ca.theta_max)) {
        std::cerr << "curve: theta_min must be less than theta_max\n";
        return 2;
      }
      return run_curve(ca);
    }
    if (*samples) return run_samples(sa);
    if (*trial) {
      if (ta.bootstrap > 0 && seed_opt->count() == 0) {
        std::cerr << "trial: --seed is required with --bootstrap\n";
        return 2;
      }
      return run_trial(ta);
    }
    if (*sets) return run_sets(sets_a, sets_b);
  } catch (const overlap::numerical_integrity_error& e) {
    std::cerr << "numerical integrity error: " << e.what() << "\n";
    return 4;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
