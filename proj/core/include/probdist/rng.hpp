#pragma once

#include <cstdint>
#include <random>

namespace probdist {

// Deterministic random stream keyed by (master_seed, stream_index).
//
// Two streams built from the same pair produce identical draws. Streams with
// different indices are decorrelated through a SplitMix64 key schedule, so
// parallel trials can each own a stream and stay reproducible regardless of
// execution order.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() { return engine_; }

  // Stream derived from this one's key; does not consume draws.
  RngStream substream(std::uint64_t index) const;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace probdist
