#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace relaybf::rng {

// One splitmix64 step; the standard 64-bit finalizer-based generator.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic combiner for (seed, trial, stream) -> engine seed. Distinct
// inputs give independent-looking streams; identical inputs give identical
// streams regardless of how many values other streams consumed.
std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// Gaussian/uniform stream with value semantics over a fixed seed.
// Draw order is part of the contract: reports and tests depend on it.
class Stream {
public:
  explicit Stream(std::uint64_t engine_seed);
  Stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream_id);

  // Uniform on (0, 1].
  double uniform();
  // Standard normal N(0, 1) via Box-Muller (pairs cached).
  double normal();
  // Circularly-symmetric complex normal CN(0, 1): E|z|^2 = 1.
  std::complex<double> cnormal();

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace relaybf::rng
