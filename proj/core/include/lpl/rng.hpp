#pragma once

#include <cstdint>
#include <random>

namespace lpl {

/// Seeded random stream. Identical (seed, stream id) pairs reproduce identical
/// draw sequences; distinct stream ids give decorrelated sequences. Not
/// thread-safe: each task owns its own stream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  /// Child stream derived deterministically from this stream's identity.
  RngStream derive(std::uint64_t child) const;

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace lpl
