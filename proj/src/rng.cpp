#include "relaybf/rng.hpp"

#include <cmath>
#include <numbers>

namespace relaybf::rng {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= a * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL;
  h ^= splitmix64(s);
  s ^= b * 0xDA942042E4DD58B5ULL + 0x9E6C63D0876A9A63ULL;
  h ^= splitmix64(s);
  return h;
}

Stream::Stream(std::uint64_t engine_seed) : engine_(engine_seed) {}

Stream::Stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream_id)
    : engine_(mix(seed, trial, stream_id)) {}

double Stream::uniform() {
  // 53 significant bits, shifted into (0, 1] so log() is always finite.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double Stream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> Stream::cnormal() {
  // Real and imaginary parts N(0, 1/2) each, so E|z|^2 = 1.
  const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  const double re = normal() * inv_sqrt2;
  const double im = normal() * inv_sqrt2;
  return {re, im};
}

}  // namespace relaybf::rng
