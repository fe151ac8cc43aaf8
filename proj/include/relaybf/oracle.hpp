#pragma once

#include <cstdint>

#include "relaybf/lift.hpp"

namespace relaybf::oracle {

using channel::ZfcMode;
using lift::LiftedProblem;
using linalg::ComplexVector;

struct OracleResult {
  double j_bf = 0.0;          // best achieved min-SINR
  ComplexVector w_bf;         // the achieving beamformer (power boundary)
  long samples_used = 0;      // candidates that were actually evaluated
  long samples_discarded = 0; // candidates rejected by the scalar-mode screen
  bool all_discarded = false;
};

// Random-search baseline: isotropic complex Gaussian directions, processed by
// the mode's zero-forcing rule (strict: orthogonal projection onto the
// zero-forcing subspace; scalar: screen |w^H c2 w| <= 1e-6 ||w||^2 ||h_rr||_F
// and discard failures), scaled to the relay power boundary (min-SINR is
// monotone in the scale), then evaluated. Deterministic in seed; for a fixed
// seed the candidate sequence is nested across n_samples, so j_bf is
// nondecreasing in n_samples.
OracleResult brute_force(const LiftedProblem& lp, long n_samples,
                         std::uint64_t seed, ZfcMode mode);

}  // namespace relaybf::oracle
