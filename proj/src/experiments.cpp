#include "hurstci/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hurstci/concentration.hpp"
#include "hurstci/fbm_sim.hpp"
#include "hurstci/statistics.hpp"

namespace hurstci {

namespace {

using nlohmann::json;

struct RepOutcome {
  bool feasible = false;
  bool covered = false;
  double length = 0.0;
  double midpoint = 0.0;
};

// Run fn(rep) for rep in [0, reps) on a bounded pool; results land in a
// preallocated slot per replication, so aggregation order is fixed.
void parallel_reps(long reps, int jobs, const std::function<void(long)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || reps < 2) {
    for (long r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        long r = next.fetch_add(1);
        if (r >= reps) return;
        fn(r);
      }
    });
  }
  for (auto& th : pool) th.join();
}

CoverageRecord aggregate(std::string method, std::string filter, long n, double hurst,
                         const std::vector<RepOutcome>& outcomes, double wall) {
  CoverageRecord rec;
  rec.method = std::move(method);
  rec.filter = std::move(filter);
  rec.n = n;
  rec.hurst = hurst;
  rec.replications = static_cast<long>(outcomes.size());
  long covered = 0;
  double len = 0.0, mid = 0.0;
  for (const auto& o : outcomes) {
    if (!o.feasible) continue;
    ++rec.feasible_count;
    covered += o.covered ? 1 : 0;
    len += o.length;
    mid += o.midpoint;
  }
  if (rec.feasible_count > 0) {
    rec.coverage_pct = 100.0 * double(covered) / double(rec.feasible_count);
    rec.mean_length = len / double(rec.feasible_count);
    rec.mean_estimator = mid / double(rec.feasible_count);
  }
  rec.wall_seconds = wall;
  return rec;
}

SamplePath rescaled(const SamplePath& path, double inv_scale) {
  SamplePath out = path;
  for (double& v : out.values) v *= inv_scale;
  return out;
}

RepOutcome evaluate_interval(const ConfidenceInterval& ci, double hurst) {
  RepOutcome o;
  o.feasible = ci.feasible;
  if (ci.feasible) {
    o.covered = ci.contains(hurst);
    o.length = ci.length();
    o.midpoint = ci.midpoint();
  }
  return o;
}

std::string format_double(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

const char* kSchemaHeader = "# hurstci-table v1\n";

}  // namespace

int default_parallelism() {
  if (const char* env = std::getenv("HURSTCI_JOBS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

CoverageRecord run_coverage(Method method, const Filter& filter, long n, double hurst,
                            double scale, double alpha, long replications, std::uint64_t seed,
                            int parallelism, int M, double h_star) {
  if (replications < 1) throw std::invalid_argument("need at least one replication");
  if (parallelism <= 0) parallelism = default_parallelism();
  // warm the kappa cache before the pool (memoized; avoids duplicate work)
  if (method == Method::CIKnown) (void)kappa(filter);
  if (method == Method::CIUnknown)
    for (int m = 1; m <= M; ++m) (void)kappa(dilate(filter, m));

  auto t0 = std::chrono::steady_clock::now();
  std::vector<RepOutcome> outcomes(static_cast<size_t>(replications));
  DilationDesign design = DilationDesign::standard(M);
  parallel_reps(replications, parallelism, [&](long rep) {
    SimConfig config{hurst, scale, n, seed};
    SamplePath path = simulate_replication(config, static_cast<std::uint64_t>(rep));
    ConfidenceInterval ci;
    switch (method) {
      case Method::CIKnown:
        ci = ci_known_scale(scale == 1.0 ? path : rescaled(path, 1.0 / scale), filter, alpha);
        break;
      case Method::CIUnknown:
        ci = ci_unknown_scale(path, filter, design, alpha);
        break;
      case Method::BNP:
        ci = ci_bnp(scale == 1.0 ? path : rescaled(path, 1.0 / scale), alpha, h_star);
        break;
      case Method::CLTKnown:
        ci = ci_clt_known(scale == 1.0 ? path : rescaled(path, 1.0 / scale), filter, alpha);
        break;
      case Method::CLTUnknown:
        ci = ci_clt_unknown(path, filter, M, alpha);
        break;
    }
    outcomes[static_cast<size_t>(rep)] = evaluate_interval(ci, hurst);
  });
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return aggregate(std::string(method_name(method)), filter.name, n, hurst, outcomes, wall);
}

namespace {

struct RowSpec {
  std::string label;
  std::function<ConfidenceInterval(const SamplePath&)> eval;
};

std::vector<CoverageRecord> batch_cells(const ExperimentConfig& config,
                                        const std::function<std::vector<RowSpec>()>& make_rows) {
  int jobs = config.parallelism > 0 ? config.parallelism : default_parallelism();
  std::vector<RowSpec> rows = make_rows();
  std::vector<CoverageRecord> records;
  for (long n : config.n_list) {
    for (double h : config.h_list) {
      auto t0 = std::chrono::steady_clock::now();
      std::vector<std::vector<RepOutcome>> outcomes(
          rows.size(), std::vector<RepOutcome>(static_cast<size_t>(config.replications)));
      parallel_reps(config.replications, jobs, [&](long rep) {
        SimConfig sim{h, config.scale, n, config.seed};
        SamplePath path = simulate_replication(sim, static_cast<std::uint64_t>(rep));
        for (size_t row = 0; row < rows.size(); ++row)
          outcomes[row][static_cast<size_t>(rep)] = evaluate_interval(rows[row].eval(path), h);
      });
      double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (size_t row = 0; row < rows.size(); ++row)
        records.push_back(
            aggregate(rows[row].label, rows[row].label, n, h, outcomes[row], wall / rows.size()));
    }
  }
  return records;
}

}  // namespace

std::vector<CoverageRecord> coverage_table_known(const ExperimentConfig& config) {
  auto make_rows = [&]() {
    std::vector<RowSpec> rows;
    for (const std::string& name : config.filters) {
      Filter f = builtin_filter(name);
      (void)kappa(f);
      double alpha = config.alpha;
      rows.push_back({"CI[" + name + "]",
                      [f, alpha](const SamplePath& p) { return ci_known_scale(p, f, alpha); }});
      rows.push_back({"CLT[" + name + "]",
                      [f, alpha](const SamplePath& p) { return ci_clt_known(p, f, alpha); }});
    }
    return rows;
  };
  return batch_cells(config, make_rows);
}

std::vector<CoverageRecord> coverage_table_unknown(const ExperimentConfig& config) {
  auto make_rows = [&]() {
    std::vector<RowSpec> rows;
    for (const std::string& name : config.filters) {
      Filter f = builtin_filter(name);
      for (int M : config.m_list) {
        for (int m = 1; m <= M; ++m) (void)kappa(dilate(f, m));
        DilationDesign design = DilationDesign::standard(M);
        double alpha = config.alpha;
        std::string tag = name + "," + std::to_string(M) + "]";
        rows.push_back({"CLT[" + tag, [f, M, alpha](const SamplePath& p) {
                          return ci_clt_unknown(p, f, M, alpha);
                        }});
        rows.push_back({"CI[" + tag, [f, design, alpha](const SamplePath& p) {
                          return ci_unknown_scale(p, f, design, alpha);
                        }});
      }
    }
    return rows;
  };
  return batch_cells(config, make_rows);
}

namespace {

const std::vector<std::string>& tau_table_filters() {
  static const std::vector<std::string> names = {"i2", "d4", "c6", "i3", "d6",
                                                 "i4", "d8", "s8", "c12"};
  return names;
}

std::string table1_csv() {
  std::ostringstream os;
  os << kSchemaHeader << "n,family,alpha,inv_phi_l,inv_phi_r\n";
  const long ns[] = {50, 100, 500, 1000, 10000};
  const double alphas[] = {0.01, 0.025, 0.05, 0.10};
  for (long n : ns) {
    // caption parameters (4/sqrt(n), 4); the hypothesis scale doubles both
    GeneralBoundParams gen{2.0 * 4.0 / std::sqrt(double(n)), 2.0 * 4.0};
    for (const char* family : {"NV", "BC"}) {
      for (double a : alphas) {
        double tl, tr;
        if (family[0] == 'N') {
          tl = invert_nv_phi_l(a, gen);
          tr = invert_nv_phi_r(a, gen);
        } else {
          tl = invert_phi_l_general(a, gen);
          tr = invert_phi_r_general(a, gen);
        }
        os << n << ',' << family << ',' << format_double(a, 3) << ','
           << format_double(tl, 4) << ',' << format_double(tr, 4) << '\n';
      }
    }
  }
  return os.str();
}

std::string table2_csv() {
  std::ostringstream os;
  os << kSchemaHeader << "filter,m,tau\n";
  for (const auto& name : tau_table_filters()) {
    Filter f = builtin_filter(name);
    for (int m = 1; m <= 5; ++m)
      os << name << ',' << m << ',' << format_double(tau_a(dilate(f, m)), 6) << '\n';
  }
  return os.str();
}

std::string table3_csv() {
  std::ostringstream os;
  os << kSchemaHeader << "filter,m,sup_l1\n";
  const std::vector<std::string> names = {"i1", "i2", "d4", "c6", "i3",
                                          "d6", "i4", "d8", "c12"};
  for (const auto& name : names) {
    Filter f = builtin_filter(name);
    for (int m = 1; m <= 5; ++m)
      os << name << ',' << m << ',' << format_double(kappa(dilate(f, m)) / 2.0, 6) << '\n';
  }
  return os.str();
}

std::string table4_csv() {
  std::ostringstream os;
  os << kSchemaHeader << "filter,m,min_n\n";
  for (const auto& name : tau_table_filters()) {
    Filter f = builtin_filter(name);
    for (int m = 1; m <= 5; ++m)
      os << name << ',' << m << ',' << min_n_invertible(dilate(f, m)) << '\n';
  }
  return os.str();
}

std::string coverage_csv(const std::vector<CoverageRecord>& records) {
  std::ostringstream os;
  os << kSchemaHeader
     << "method,n,hurst,coverage_pct,mean_length,mean_estimator,replications,feasible\n";
  for (const auto& r : records) {
    os << r.method << ',' << r.n << ',' << format_double(r.hurst, 2) << ','
       << format_double(r.coverage_pct, 1) << ',' << format_double(r.mean_length, 4) << ','
       << format_double(r.mean_estimator, 4) << ',' << r.replications << ','
       << r.feasible_count << '\n';
  }
  return os.str();
}

std::string fig1_csv(const ExperimentConfig& config) {
  std::ostringstream os;
  os << kSchemaHeader << "hurst";
  std::vector<std::string> cols;
  for (const std::string& name : config.filters) {
    cols.push_back(name + ":known");
    for (int M : config.m_list) cols.push_back(name + ":unknown,M=" + std::to_string(M));
  }
  for (const auto& c : cols) os << ',' << c;
  os << '\n';
  std::vector<double> grid;
  for (double h = 0.05; h < 0.951; h += 0.01) grid.push_back(h);
  std::vector<std::vector<LengthRatioPoint>> profiles;
  for (const std::string& name : config.filters) {
    Filter f = builtin_filter(name);
    profiles.push_back(length_ratio_profile(f, std::nullopt, config.alpha, grid));
    for (int M : config.m_list)
      profiles.push_back(length_ratio_profile(f, M, config.alpha, grid));
  }
  for (size_t i = 0; i < grid.size(); ++i) {
    os << format_double(grid[i], 3);
    for (const auto& prof : profiles) os << ',' << format_double(prof[i].ratio, 6);
    os << '\n';
  }
  return os.str();
}

json record_json(const CoverageRecord& r) {
  return json{{"method", r.method},
              {"n", r.n},
              {"hurst", r.hurst},
              {"coverage_pct", r.coverage_pct},
              {"mean_length", r.mean_length},
              {"mean_estimator", r.mean_estimator},
              {"replications", r.replications},
              {"feasible", r.feasible_count},
              {"wall_seconds", r.wall_seconds}};
}

}  // namespace

std::vector<std::string> run_table(const std::string& id, const ExperimentConfig& config) {
  std::filesystem::create_directories(config.output_dir);
  auto path_for = [&](const std::string& stem, const char* ext) {
    return (std::filesystem::path(config.output_dir) / (stem + ext)).string();
  };
  std::vector<std::string> written;
  json summary;
  summary["table"] = id;
  summary["seed"] = config.seed;

  if (id == "1") {
    write_file(path_for("table1", ".csv"), table1_csv());
    written.push_back(path_for("table1", ".csv"));
  } else if (id == "2") {
    write_file(path_for("table2", ".csv"), table2_csv());
    written.push_back(path_for("table2", ".csv"));
  } else if (id == "3") {
    write_file(path_for("table3", ".csv"), table3_csv());
    written.push_back(path_for("table3", ".csv"));
  } else if (id == "4") {
    write_file(path_for("table4", ".csv"), table4_csv());
    written.push_back(path_for("table4", ".csv"));
  } else if (id == "5" || id == "6") {
    auto records = (id == "5") ? coverage_table_known(config) : coverage_table_unknown(config);
    write_file(path_for("table" + id, ".csv"), coverage_csv(records));
    written.push_back(path_for("table" + id, ".csv"));
    json arr = json::array();
    for (const auto& r : records) arr.push_back(record_json(r));
    summary["records"] = arr;
  } else if (id == "fig1") {
    write_file(path_for("fig1_ratio", ".csv"), fig1_csv(config));
    written.push_back(path_for("fig1_ratio", ".csv"));
  } else {
    throw std::invalid_argument("unknown table id: " + id);
  }
  write_file(path_for("table_" + id + "_summary", ".json"), summary.dump(2) + "\n");
  written.push_back(path_for("table_" + id + "_summary", ".json"));
  return written;
}

}  // namespace hurstci
