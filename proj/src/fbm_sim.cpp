#include "hurstci/fbm_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "hurstci/rng.hpp"

namespace hurstci {

double fgn_autocovariance(double hurst, double scale, long n, long k) {
  if (k < 0) throw std::invalid_argument("lag must be nonnegative");
  const double two_h = 2.0 * hurst;
  const double kk = double(k);
  double second_diff = std::pow(kk + 1.0, two_h) - 2.0 * std::pow(kk, two_h) +
                       std::pow(std::abs(kk - 1.0), two_h);
  return scale * scale / (2.0 * std::pow(double(n), two_h)) * second_diff;
}

namespace {

void check_config(const SimConfig& c) {
  if (!(c.hurst > 0.0 && c.hurst < 1.0)) throw std::invalid_argument("H must be in (0,1)");
  if (!(c.scale > 0.0)) throw std::invalid_argument("scale must be positive");
  if (c.n < 2) throw std::invalid_argument("need n >= 2");
}

SamplePath synthesize(const SimConfig& config, rng::Stream stream) {
  const long N = config.n - 1;  // increments
  SamplePath path;
  path.step = 1.0 / double(config.n);
  path.meta = PathMeta{config.hurst, config.scale, config.seed};
  if (N == 1) {
    double sd = std::sqrt(fgn_autocovariance(config.hurst, config.scale, config.n, 0));
    path.values = {0.0, sd * stream.normal()};
    return path;
  }
  const size_t M = 2 * static_cast<size_t>(N);
  std::vector<std::complex<double>> c(M);
  for (long k = 0; k <= N; ++k)
    c[static_cast<size_t>(k)] = fgn_autocovariance(config.hurst, config.scale, config.n, k);
  for (long k = 1; k < N; ++k) c[M - static_cast<size_t>(k)] = c[static_cast<size_t>(k)];
  detail::fft(c, false);

  double max_ev = 0.0, min_ev = 0.0;
  for (auto& z : c) {
    max_ev = std::max(max_ev, z.real());
    min_ev = std::min(min_ev, z.real());
  }
  if (min_ev < -1e-9 * max_ev)
    throw std::runtime_error("circulant embedding failed: negative eigenvalue");

  std::vector<std::complex<double>> w(M);
  const double inv_m = 1.0 / double(M);
  {
    double l0 = std::max(0.0, c[0].real());
    double ln = std::max(0.0, c[static_cast<size_t>(N)].real());
    w[0] = std::sqrt(l0 * inv_m) * stream.normal();
    w[static_cast<size_t>(N)] = std::sqrt(ln * inv_m) * stream.normal();
  }
  for (long k = 1; k < N; ++k) {
    double lk = std::max(0.0, c[static_cast<size_t>(k)].real());
    double amp = std::sqrt(lk * inv_m * 0.5);
    double g1 = stream.normal();
    double g2 = stream.normal();
    w[static_cast<size_t>(k)] = std::complex<double>(amp * g1, amp * g2);
    w[M - static_cast<size_t>(k)] = std::conj(w[static_cast<size_t>(k)]);
  }
  detail::fft(w, false);

  path.values.resize(static_cast<size_t>(config.n));
  path.values[0] = 0.0;
  double acc = 0.0;
  for (long i = 0; i < N; ++i) {
    acc += w[static_cast<size_t>(i)].real();
    path.values[static_cast<size_t>(i) + 1] = acc;
  }
  return path;
}

}  // namespace

SamplePath simulate(const SimConfig& config) {
  check_config(config);
  return synthesize(config, rng::Stream(config.seed));
}

SamplePath simulate_replication(const SimConfig& config, std::uint64_t replication) {
  check_config(config);
  return synthesize(config, rng::Stream::for_replication(config.seed, replication));
}

}  // namespace hurstci
