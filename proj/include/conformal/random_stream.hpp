#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace conformal {

// Seedable, splittable 64-bit random stream.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard, so a given seed produces the same bits on every conforming
// platform. Uniform doubles are built from the top 53 bits of each draw
// rather than std::uniform_real_distribution (implementation-defined).
//
// Substreams: split(name) derives a child seed as
//   splitmix64(seed ^ fnv1a64(name))
// so children are independent of how much the parent has been consumed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  RandomStream split(std::string_view name) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), multiples of 2^-53.
  double uniform();

  // Uniform on (0, 1], multiples of 2^-53. Safe to pass to log().
  double uniform_open_zero();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

}  // namespace conformal
