#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hurstci/concentration.hpp"
#include "hurstci/experiments.hpp"
#include "hurstci/fbm_sim.hpp"
#include "hurstci/intervals.hpp"

using nlohmann::json;
using namespace hurstci;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

SamplePath read_path_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  SamplePath path;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    path.values.push_back(std::stod(line));
  }
  if (path.values.size() < 2) throw std::runtime_error("path needs at least 2 values");
  path.step = 1.0 / double(path.values.size());
  return path;
}

Filter resolve_filter(const std::string& name, int m) {
  Filter f = builtin_filter(name);
  return m > 1 ? dilate(f, m) : f;
}

json interval_json(const ConfidenceInterval& ci, double alpha) {
  json diag;
  diag["s_values"] = ci.diagnostics.s_values;
  diag["q_values"] = ci.diagnostics.q_values;
  return json{{"method", std::string(method_name(ci.method))},
              {"alpha", alpha},
              {"lower", ci.lower},
              {"upper", ci.upper},
              {"feasible", ci.feasible},
              {"estimator", ci.diagnostics.estimator},
              {"diagnostics", diag}};
}

std::vector<double> parse_weights(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void apply_config_file(const std::string& file, ExperimentConfig& config) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config " + file);
  json j = json::parse(in);
  if (j.contains("table")) config.table = j["table"].get<std::string>();
  if (j.contains("replications")) config.replications = j["replications"].get<long>();
  if (j.contains("n_list")) config.n_list = j["n_list"].get<std::vector<long>>();
  if (j.contains("h_list")) config.h_list = j["h_list"].get<std::vector<double>>();
  if (j.contains("scale")) config.scale = j["scale"].get<double>();
  if (j.contains("filters")) config.filters = j["filters"].get<std::vector<std::string>>();
  if (j.contains("m_list")) config.m_list = j["m_list"].get<std::vector<int>>();
  if (j.contains("alpha")) config.alpha = j["alpha"].get<double>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("parallelism")) config.parallelism = j["parallelism"].get<int>();
  if (j.contains("output_dir")) config.output_dir = j["output_dir"].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confidence intervals for the Hurst parameter of fractional Brownian motion"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate an fBm sample path (CSV)");
  double sim_h = 0.5, sim_c = 1.0;
  long sim_n = 1000;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  sim->add_option("--hurst,-H", sim_h, "Hurst parameter in (0,1)")->required();
  sim->add_option("--scale,-C", sim_c, "scaling coefficient");
  sim->add_option("-n", sim_n, "number of observations")->required();
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out,-o", sim_out, "output file (default stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "confidence interval from a path CSV");
  std::string est_input, est_filter = "i2", est_method = "ci-known", est_d;
  int est_m = 1, est_M = 2;
  double est_alpha = 0.05, est_scale = 1.0, est_hstar = 0.8;
  est->add_option("--input,-i", est_input, "input CSV (one value per line)")->required();
  est->add_option("--filter,-f", est_filter, "filter name (i1..i4, d4, d6, d8, s8, c6, c12)");
  est->add_option("--m", est_m, "dilation applied to the filter");
  est->add_option("--method", est_method, "ci-known|ci-unknown|bnp|clt-known|clt-unknown");
  est->add_option("--alpha,-a", est_alpha, "level alpha");
  est->add_option("--M", est_M, "number of dilations (unknown-scale methods)");
  est->add_option("--scale,-C", est_scale, "known scaling coefficient");
  est->add_option("--d", est_d, "comma-separated design weights (default: A)");
  est->add_option("--h-star", est_hstar, "upper bound on H for the baseline method");

  // kappa
  auto* kap = app.add_subcommand("kappa", "filter constants");
  std::string kap_filter = "i2";
  int kap_m = 1;
  kap->add_option("--filter,-f", kap_filter, "filter name")->required();
  kap->add_option("--m", kap_m, "dilation");

  // table
  auto* tab = app.add_subcommand("table", "reproduce a comparison table");
  ExperimentConfig config;
  std::string tab_config_file;
  tab->add_option("--id", config.table, "1|2|3|4|5|6|fig1")->required();
  tab->add_option("--reps", config.replications, "Monte-Carlo replications");
  tab->add_option("--seed", config.seed, "RNG seed");
  tab->add_option("--alpha", config.alpha, "level alpha");
  tab->add_option("--out-dir", config.output_dir, "output directory");
  tab->add_option("--jobs", config.parallelism, "worker threads");
  tab->add_option("--config", tab_config_file, "JSON config overriding flags");

  // coverage
  auto* cov = app.add_subcommand("coverage", "Monte-Carlo coverage of one configuration");
  std::string cov_method = "ci-known", cov_filter = "i2", cov_config_file;
  long cov_n = 100, cov_reps = 500;
  double cov_h = 0.5, cov_c = 1.0, cov_alpha = 0.05, cov_hstar = 0.8;
  std::uint64_t cov_seed = 20270831;
  int cov_jobs = 0, cov_M = 2, cov_m = 1;
  cov->add_option("--method", cov_method, "interval method");
  cov->add_option("--filter,-f", cov_filter, "filter name");
  cov->add_option("--m", cov_m, "dilation applied to the filter");
  cov->add_option("-n", cov_n, "observations per path");
  cov->add_option("--hurst,-H", cov_h, "true Hurst parameter");
  cov->add_option("--scale,-C", cov_c, "true scaling coefficient");
  cov->add_option("--alpha,-a", cov_alpha, "level alpha");
  cov->add_option("--reps", cov_reps, "replications");
  cov->add_option("--seed", cov_seed, "RNG seed");
  cov->add_option("--jobs", cov_jobs, "worker threads");
  cov->add_option("--M", cov_M, "number of dilations");
  cov->add_option("--h-star", cov_hstar, "upper bound on H for the baseline method");
  cov->add_option("--config", cov_config_file, "JSON config overriding flags");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      SamplePath path = simulate({sim_h, sim_c, sim_n, sim_seed});
      std::ostringstream os;
      os << "# H=" << sim_h << ",C=" << sim_c << ",n=" << sim_n << ",seed=" << sim_seed << "\n";
      os.precision(17);
      for (double v : path.values) os << v << "\n";
      if (sim_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream out(sim_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + sim_out);
        out << os.str();
      }
      return kExitOk;
    }
    if (*est) {
      SamplePath path = read_path_csv(est_input);
      if (est_scale != 1.0 &&
          (est_method == "ci-known" || est_method == "clt-known" || est_method == "bnp"))
        for (double& v : path.values) v /= est_scale;
      Filter f = resolve_filter(est_filter, est_m);
      Method method = method_from_name(est_method);
      ConfidenceInterval ci;
      switch (method) {
        case Method::CIKnown: ci = ci_known_scale(path, f, est_alpha); break;
        case Method::CIUnknown: {
          DilationDesign design = DilationDesign::standard(est_M);
          if (!est_d.empty()) {
            design.d = parse_weights(est_d);
            design.M = static_cast<int>(design.d.size());
            design.validate();
          }
          ci = ci_unknown_scale(path, f, design, est_alpha);
          break;
        }
        case Method::BNP: ci = ci_bnp(path, est_alpha, est_hstar); break;
        case Method::CLTKnown: ci = ci_clt_known(path, f, est_alpha); break;
        case Method::CLTUnknown: ci = ci_clt_unknown(path, f, est_M, est_alpha); break;
      }
      std::cout << interval_json(ci, est_alpha).dump(2) << std::endl;
      return ci.feasible ? kExitOk : kExitInfeasible;
    }
    if (*kap) {
      Filter f = resolve_filter(kap_filter, kap_m);
      json out{{"filter", f.name},
               {"order", f.order},
               {"length_minus_one", f.length_minus_one()},
               {"tau", tau_a(f)},
               {"kappa", kappa(f)},
               {"min_n", min_n_invertible(f)}};
      std::cout << out.dump(2) << std::endl;
      return kExitOk;
    }
    if (*tab) {
      if (!tab_config_file.empty()) apply_config_file(tab_config_file, config);
      for (const auto& file : run_table(config.table, config)) std::cout << file << "\n";
      return kExitOk;
    }
    if (*cov) {
      ExperimentConfig c;
      c.replications = cov_reps;
      c.alpha = cov_alpha;
      c.seed = cov_seed;
      c.parallelism = cov_jobs;
      if (!cov_config_file.empty()) {
        apply_config_file(cov_config_file, c);
        cov_reps = c.replications;
        cov_alpha = c.alpha;
        cov_seed = c.seed;
        cov_jobs = c.parallelism;
      }
      Filter f = resolve_filter(cov_filter, cov_m);
      CoverageRecord rec = run_coverage(method_from_name(cov_method), f, cov_n, cov_h, cov_c,
                                        cov_alpha, cov_reps, cov_seed, cov_jobs, cov_M, cov_hstar);
      json out{{"method", rec.method},       {"filter", rec.filter},
               {"n", rec.n},                 {"hurst", rec.hurst},
               {"coverage_pct", rec.coverage_pct}, {"mean_length", rec.mean_length},
               {"mean_estimator", rec.mean_estimator}, {"replications", rec.replications},
               {"feasible", rec.feasible_count},  {"wall_seconds", rec.wall_seconds}};
      std::cout << out.dump(2) << std::endl;
      return rec.feasible_count > 0 ? kExitOk : kExitInfeasible;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitError;
  }
  return kExitError;
}
