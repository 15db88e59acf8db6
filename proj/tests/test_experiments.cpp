#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hurstci/experiments.hpp"

using namespace hurstci;
using Catch::Approx;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("coverage runs are deterministic and parallelism independent") {
  Filter i2 = builtin_filter("i2");
  CoverageRecord serial = run_coverage(Method::CIKnown, i2, 64, 0.5, 1.0, 0.05, 40, 99, 1);
  CoverageRecord pooled = run_coverage(Method::CIKnown, i2, 64, 0.5, 1.0, 0.05, 40, 99, 4);
  CHECK(serial.coverage_pct == pooled.coverage_pct);
  CHECK(serial.mean_length == pooled.mean_length);
  CHECK(serial.mean_estimator == pooled.mean_estimator);
  CHECK(serial.feasible_count == pooled.feasible_count);
  CoverageRecord again = run_coverage(Method::CIKnown, i2, 64, 0.5, 1.0, 0.05, 40, 99, 3);
  CHECK(serial.mean_length == again.mean_length);
}

TEST_CASE("single replication coverage is zero or one hundred") {
  Filter i2 = builtin_filter("i2");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    CoverageRecord rec = run_coverage(Method::CIKnown, i2, 80, 0.4, 1.0, 0.05, 1, seed, 1);
    CHECK((rec.coverage_pct == 0.0 || rec.coverage_pct == 100.0));
  }
}

TEST_CASE("infeasible configurations are recorded, not thrown") {
  Filter i2 = builtin_filter("i2");
  // n far below the baseline feasibility threshold
  CoverageRecord rec = run_coverage(Method::BNP, i2, 52, 0.5, 1.0, 0.01, 5, 7, 1, 2, 0.8);
  CHECK(rec.feasible_count == 0);
  CHECK(rec.replications == 5);
}

TEST_CASE("unknown-scale coverage ignores the true scale") {
  Filter i2 = builtin_filter("i2");
  CoverageRecord a = run_coverage(Method::CIUnknown, i2, 120, 0.5, 1.0, 0.05, 30, 5, 2, 2);
  CoverageRecord b = run_coverage(Method::CIUnknown, i2, 120, 0.5, 2.0, 0.05, 30, 5, 2, 2);
  CHECK(a.mean_length == Approx(b.mean_length).margin(1e-9));
  CHECK(a.coverage_pct == b.coverage_pct);
}

TEST_CASE("table outputs are byte-identical across runs and thread counts") {
  ExperimentConfig cfg;
  cfg.replications = 25;
  cfg.n_list = {60, 120};
  cfg.h_list = {0.3, 0.7};
  cfg.filters = {"i2"};
  cfg.m_list = {2};
  cfg.seed = 321;

  auto tmp = std::filesystem::temp_directory_path() / "hurstci_test_tables";
  cfg.output_dir = (tmp / "a").string();
  cfg.parallelism = 1;
  auto files_a = run_table("5", cfg);
  cfg.output_dir = (tmp / "b").string();
  cfg.parallelism = 4;
  auto files_b = run_table("5", cfg);
  REQUIRE(files_a.size() == files_b.size());
  CHECK(slurp(files_a[0]) == slurp(files_b[0]));

  cfg.output_dir = (tmp / "c").string();
  auto files_c = run_table("4", cfg);
  cfg.output_dir = (tmp / "d").string();
  auto files_d = run_table("4", cfg);
  CHECK(slurp(files_c[0]) == slurp(files_d[0]));
  CHECK(slurp(files_c[0]).find("filter,m,min_n") != std::string::npos);
}

TEST_CASE("unknown table id") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(run_table("17", cfg), std::invalid_argument);
}
