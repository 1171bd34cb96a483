#include "conformal/random_stream.hpp"

namespace conformal {

namespace {
constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RandomStream RandomStream::split(std::string_view name) const {
  return RandomStream(splitmix64(seed_ ^ fnv1a64(name)));
}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * kTwoPowMinus53;
}

double RandomStream::uniform_open_zero() {
  return static_cast<double>((engine_() >> 11) + 1) * kTwoPowMinus53;
}

}  // namespace conformal
