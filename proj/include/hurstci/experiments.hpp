#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hurstci/filter_bank.hpp"
#include "hurstci/intervals.hpp"

namespace hurstci {

struct ExperimentConfig {
  std::string table;  // "1".."6" or "fig1"
  long replications = 500;
  std::vector<long> n_list = {50, 100, 500, 1000, 10000};
  std::vector<double> h_list = {0.2, 0.5, 0.8};
  double scale = 1.0;
  std::vector<std::string> filters = {"i2", "d4"};
  std::vector<int> m_list = {2, 5};
  double alpha = 0.05;
  std::uint64_t seed = 20270831;
  int parallelism = 0;  // 0: hardware concurrency (or HURSTCI_JOBS)
  std::string output_dir = ".";
};

struct CoverageRecord {
  std::string method;
  std::string filter;
  long n = 0;
  double hurst = 0.0;
  double coverage_pct = 0.0;   // over feasible replications
  double mean_length = 0.0;
  double mean_estimator = 0.0;  // mean interval midpoint
  long replications = 0;
  long feasible_count = 0;
  double wall_seconds = 0.0;
};

int default_parallelism();

// Monte-Carlo coverage for one configuration; replication streams are
// derived from (seed, index) so the result is independent of parallelism.
// M is used by the unknown-scale methods, h_star by the baseline method.
CoverageRecord run_coverage(Method method, const Filter& filter, long n, double hurst,
                            double scale, double alpha, long replications, std::uint64_t seed,
                            int parallelism, int M = 2, double h_star = 0.8);

// Monte-Carlo rows of the two comparison tables (paths shared across the
// methods of a cell, replication streams derived from (seed, index)).
std::vector<CoverageRecord> coverage_table_known(const ExperimentConfig& config);
std::vector<CoverageRecord> coverage_table_unknown(const ExperimentConfig& config);

// Writes <output_dir>/table<k>.csv (plus a JSON summary) and returns the
// paths of the files produced. Deterministic for a fixed config.
std::vector<std::string> run_table(const std::string& id, const ExperimentConfig& config);

}  // namespace hurstci
