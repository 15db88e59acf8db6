#pragma once

#include <cstdint>

namespace hurstci::rng {

// xoshiro256++ seeded through splitmix64. Stream derivation for parallel
// replications: state = splitmix64 chain over (seed, 0x9e3779b97f4a7c15 * (index+1)),
// so (seed, index) -> stream is independent of execution order and thread count.
class Stream {
 public:
  explicit Stream(std::uint64_t seed);
  static Stream for_replication(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  double uniform01();  // (0,1), 53-bit
  double normal();     // standard normal, Marsaglia polar

 private:
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace hurstci::rng
