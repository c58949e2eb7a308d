#include "probdist/rng.hpp"

namespace probdist {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(~stream_index))) {}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RngStream::normal() { return normal_(engine_); }

std::size_t RngStream::index(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(master_seed_, splitmix64(stream_index_ * 0x100000001b3ULL + index + 1));
}

}  // namespace probdist
