#include "hurstci/statistics.hpp"

#include <cmath>
#include <stdexcept>

namespace hurstci {

namespace {

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

FilteredSeries filter_series(const SamplePath& path, const Filter& filter) {
  const long n = path.n();
  const int ell = filter.length_minus_one();
  if (n <= ell) throw std::invalid_argument("path too short for this filter");
  FilteredSeries out;
  out.filter_name = filter.name;
  out.n = n;
  out.values.resize(static_cast<size_t>(n - ell));
  for (long i = ell; i < n; ++i) {
    double v = 0.0;
    for (int q = 0; q <= ell; ++q)
      v += filter.coeffs[static_cast<size_t>(q)] * path.values[static_cast<size_t>(i - q)];
    out.values[static_cast<size_t>(i - ell)] = v;
  }
  return out;
}

QuadraticVariation quadratic_variation(const SamplePath& path, const Filter& filter) {
  FilteredSeries v = filter_series(path, filter);
  KahanSum acc;
  for (double x : v.values) acc.add(x * x);
  QuadraticVariation q;
  q.filter_name = filter.name;
  q.n = path.n();
  q.count = static_cast<long>(v.values.size());
  q.s_n = acc.s / double(q.count);
  return q;
}

double v_n(const SamplePath& path, const Filter& filter, double hurst, double scale) {
  const double s = quadratic_variation(path, filter).s_n;
  const double pi0 = pi_cov(filter, hurst, 0);
  const double n2h = std::pow(double(path.n()), 2.0 * hurst);
  return n2h * s / (scale * scale * pi0) - 1.0;
}

}  // namespace hurstci
