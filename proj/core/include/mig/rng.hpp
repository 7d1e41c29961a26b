#pragma once

#include <cstdint>

namespace mig {

// Seeded random stream built on xoshiro256++ with splitmix64 state
// expansion. The contract is reproducibility: the same (seed, stream)
// pair yields the same draw sequence on every platform, run, and thread
// count. Parallel code derives disjoint child streams instead of
// sharing one generator.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Deterministically derived child stream.
  RngStream substream(std::uint64_t id) const;

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Standard normal via inverse-CDF transform of uniform().
  double normal();

  /// Gamma(shape, 1) by Marsaglia-Tsang squeeze, any shape > 0.
  double gamma(double shape);

  double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// splitmix64 avalanche, used for stream-id derivation.
std::uint64_t mix64(std::uint64_t x);

}  // namespace mig
