#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relaybf/linalg.hpp"

namespace relaybf::channel {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

// How the relay's self-interference channel is treated by the zero-forcing
// condition:
//  - scalar: full-rank self-interference; the lifted quadratic w^H C2^H C2 w
//    is constrained to zero through its Hermitian/skew parts (relaxed form).
//  - strict: the self-interference channel is low-rank (rsi_rank) and the
//    beamformer is confined to the exact zero-forcing null space.
enum class ZfcMode { scalar, strict };

struct NetworkConfig {
  int n = 2;                   // relay antennas (>= 2)
  double total_power = 4.0;    // P_T, watts
  // Source and relay transmit powers. Unset means the default split
  // p1 = p2 = P_T/4, p_relay = P_T/2.
  std::optional<double> p1;
  std::optional<double> p2;
  std::optional<double> p_relay;
  double sigma2 = 1.0;         // noise variance at relay and users, watts
  double rsi_db = -40.0;       // residual self-interference power, dB
  ZfcMode zfc_mode = ZfcMode::scalar;
  int rsi_rank = 1;            // rank of H_rr in strict mode
  double bisection_tol = 1e-4; // absolute tolerance on the balanced SINR
  double feas_tol = 1e-8;      // feasibility slack threshold
  std::uint64_t seed = 0;

  double source_power(int user) const;  // user in {1, 2}
  double relay_budget() const;
  double rsi_variance() const;          // 10^(rsi_db/10)
};

// Returns a list of human-readable violations; empty means valid.
std::vector<std::string> validate_config(const NetworkConfig& cfg);
bool is_valid(const NetworkConfig& cfg);

// One draw of every channel in the two-way relay network. Main channels are
// unit-variance complex Gaussian; self-interference channels (h_rr and the
// user loopback scalars f_11, f_22) carry the rsi_db variance. In strict mode
// h_rr = sqrt(v/r) A B^H with A, B iid CN(0,1) n x r factors, so its rank is
// exactly rsi_rank while E||h_rr||_F^2 matches the full-rank draw.
struct ChannelRealization {
  ComplexVector f_1r, f_2r;  // user -> relay
  ComplexVector f_r1, f_r2;  // relay -> user
  ComplexMatrix h_rr;        // relay self-interference, n x n
  Complex f_11, f_22;        // user loopback
  std::uint64_t trial_index = 0;
};

// Deterministic in (cfg.seed, trial_index); the underlying unit-variance
// draws do not depend on rsi_db, so realizations at different RSI levels are
// exactly proportional (paired trials).
ChannelRealization sample_realization(const NetworkConfig& cfg, std::uint64_t trial_index);

}  // namespace relaybf::channel
