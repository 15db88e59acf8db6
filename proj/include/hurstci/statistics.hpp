#pragma once

#include <string>
#include <vector>

#include "hurstci/fbm_sim.hpp"
#include "hurstci/filter_bank.hpp"

namespace hurstci {

// V^a(i/n) = sum_q a_q B((i-q)/n) for i = ell..n-1.
struct FilteredSeries {
  std::vector<double> values;
  std::string filter_name;
  long n = 0;
};

struct QuadraticVariation {
  double s_n = 0.0;
  std::string filter_name;
  long n = 0;
  long count = 0;  // n - ell
};

// Throws std::invalid_argument when n <= ell.
FilteredSeries filter_series(const SamplePath& path, const Filter& filter);

// S_n^a = mean of squared filtered values (compensated summation).
QuadraticVariation quadratic_variation(const SamplePath& path, const Filter& filter);

// V_n^a = n^{2H} S_n^a / (C^2 pi_H^a(0)) - 1.
double v_n(const SamplePath& path, const Filter& filter, double hurst, double scale);

}  // namespace hurstci
