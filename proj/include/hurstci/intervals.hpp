#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hurstci/fbm_sim.hpp"
#include "hurstci/filter_bank.hpp"

namespace hurstci {

enum class Method { CIKnown, CIUnknown, BNP, CLTKnown, CLTUnknown };
std::string_view method_name(Method m);
Method method_from_name(std::string_view name);

struct IntervalDiagnostics {
  std::vector<double> s_values;  // quadratic variations used
  std::vector<double> q_values;  // concentration / normal quantiles used
  double estimator = 0.0;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;  // 1 - alpha
  Method method = Method::CIKnown;
  bool feasible = false;
  IntervalDiagnostics diagnostics;

  double length() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  bool contains(double h) const { return feasible && lower <= h && h <= upper; }
};

// Weights over dilations 1..M: sum d_i = 0, d^T L_M > 0, all d_i != 0.
struct DilationDesign {
  int M = 2;
  std::vector<double> d;

  static DilationDesign standard(int M);  // d = log(m) - mean(log(m))
  void validate() const;                  // throws std::invalid_argument
  std::vector<double> log_m() const;
};

// g_n(x) = 2 x log n - log pi_x^a(0).
double gn(double x, const Filter& filter, long n);

// Bisection to 1e-12 in x; values below the image return 0, above return 1.
double gn_inverse(double y, const Filter& filter, long n);

// Smallest n for which g_n is certified strictly increasing on (0,1):
// the exp(sup ...) condition intersected with the data requirement n >= ell+1.
// Throws std::invalid_argument when tau^a < 0.
long min_n_invertible(const Filter& filter);

// Concentration interval, C = 1 (callers rescale the path by 1/C first).
ConfidenceInterval ci_known_scale(const SamplePath& path, const Filter& filter, double alpha);

// Concentration interval free of C, via dilations 1..M.
ConfidenceInterval ci_unknown_scale(const SamplePath& path, const Filter& filter,
                                    const DilationDesign& design, double alpha);

// Baseline second-order-increments interval; the path must carry n+2
// observations of a C=1 fBm and H <= h_star is assumed.
ConfidenceInterval ci_bnp(const SamplePath& path, double alpha, double h_star);

double estimator_std(const SamplePath& path, const Filter& filter);
double estimator_gen(const SamplePath& path, const Filter& filter, int M);

// sigma^2 for the two central limit theorems.
double sigma_std_sq(const Filter& filter, double hurst);
double sigma_gen_sq(const Filter& base, double hurst, int M);

ConfidenceInterval ci_clt_known(const SamplePath& path, const Filter& filter, double alpha);
ConfidenceInterval ci_clt_unknown(const SamplePath& path, const Filter& filter, int M,
                                  double alpha);

struct LengthRatioPoint {
  double hurst = 0.0;
  double ratio = 0.0;  // concentration length / CLT length, asymptotic
};

// Known-scale case when M is empty, unknown-scale (d = A) otherwise.
std::vector<LengthRatioPoint> length_ratio_profile(const Filter& filter, std::optional<int> M,
                                                   double alpha, std::span<const double> h_grid);

}  // namespace hurstci
