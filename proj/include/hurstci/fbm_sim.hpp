#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hurstci {

struct PathMeta {
  double hurst = 0.0;
  double scale = 1.0;
  std::uint64_t seed = 0;
};

// Observations B_H(i/n), i = 0..n-1; values[0] = 0.
struct SamplePath {
  std::vector<double> values;
  double step = 0.0;  // 1/n
  std::optional<PathMeta> meta;
  long n() const { return static_cast<long>(values.size()); }
};

struct SimConfig {
  double hurst = 0.5;
  double scale = 1.0;  // C
  long n = 2;
  std::uint64_t seed = 0;
};

// Covariance of the increments B((i+k+1)/n) - B((i+k)/n) and B((i+1)/n) - B(i/n):
// gamma(k) = C^2/(2 n^{2H}) (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
double fgn_autocovariance(double hurst, double scale, long n, long k);

// Exact-in-law path via circulant embedding of the n-1 increments
// (transform size 2(n-1)); deterministic for a fixed seed.
// Throws std::runtime_error if an embedding eigenvalue is below
// -1e-9 * max eigenvalue; tiny negatives are clamped to zero.
SamplePath simulate(const SimConfig& config);

// Same path but with the noise stream derived from (seed, replication index).
SamplePath simulate_replication(const SimConfig& config, std::uint64_t replication);

}  // namespace hurstci
