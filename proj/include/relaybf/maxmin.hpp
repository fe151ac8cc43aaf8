#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "relaybf/lift.hpp"
#include "relaybf/sdp.hpp"

namespace relaybf::maxmin {

using channel::ChannelRealization;
using channel::NetworkConfig;
using lift::LiftedProblem;
using linalg::ComplexVector;
using linalg::HermitianMatrix;

inline constexpr int kDefaultRandomizations = 200;
inline constexpr double kAuxScalarMin = 1e-10;  // lower bound standing in for "> 0"

struct Diagnostics {
  int bisection_iterations = 0;
  int feasibility_solves = 0;   // includes retries
  int retries = 0;
  int infeasible_after_retry = 0;
  bool upper_bound_fallback = false;  // analytic cap used instead of SDP value
  bool bracket_tightened = false;     // j_max lifted to a recovered feasible value
  std::string recovery_method;
  int recovery_candidates_accepted = 0;
  double j_lower_unclamped = 0.0;     // raw recovered value before invariant clamp
  // Certificates aggregated over every solve labeled feasible/optimal in this
  // run: worst rechecked row violation (normalized by 1 + |rhs|), most
  // negative eigenvalue, worst fractional-normalization residual.
  double max_cert_violation = 0.0;
  double min_cert_eigenvalue = 0.0;
  double cc_denominator_residual = 0.0;
  std::vector<std::string> warnings;
  double ms_lift = 0.0, ms_upper = 0.0, ms_bisection = 0.0, ms_recovery = 0.0;
};

struct MaxMinResult {
  double j_up = 0.0;       // per-user fractional-SDP bound, max of the two
  double j_up_1 = 0.0, j_up_2 = 0.0;
  double j_max = 0.0;      // relaxation optimum located by bisection
  double j_lower = 0.0;    // achieved min-SINR of w
  ComplexVector w;         // recovered beamformer, full n^2 dimension
  HermitianMatrix g_star;  // relaxed solution, full n^2 dimension
  double rank_ratio = 0.0; // lambda_2 / lambda_1 of g_star
  double rate_lower_bits = 0.0;  // log2(1 + j_lower)
  std::array<double, 2> per_user_sinr = {0.0, 0.0};
  Diagnostics diag;
};

// Internal working form of the SDP data: scalar mode keeps the full n^2
// dimension with the two real zero-forcing equality rows; strict mode
// substitutes w = Q w_hat with Q spanning the zero-forcing subspace, which
// removes the equalities and shrinks the dimension (face reduction -- the
// literal trace equality on a PSD matrix has no interior point).
struct ModeContext {
  int dim = 0;
  HermitianMatrix signal[2];  // p_{3-i} H_i, reduced as needed
  HermitianMatrix noise[2];   // sigma2 F_i
  HermitianMatrix power;      // C_1
  std::vector<sdp::TraceConstraint> zfc_rows;  // scalar mode only
  double phi[2] = {0.0, 0.0};
  double p_relay = 0.0;
  linalg::ComplexMatrix basis;  // n^2 x dim map back to full space (empty = identity)
};

ModeContext build_context(const LiftedProblem& lp);

// The two per-user linear-fractional bounds, solved as linear SDPs via the
// Charnes-Cooper substitution Y = omega G, with omega >= kAuxScalarMin.
struct UpperBound {
  double j_up = 0.0, j_1 = 0.0, j_2 = 0.0;
  bool fallback = false;  // analytic cap used for a failed per-user solve
  double max_denominator_residual = 0.0;  // |Tr(noise Y) + omega phi - 1|
  double max_violation = 0.0;
  double min_eigenvalue = 0.0;  // most negative eigenvalue across accepted Y
  std::vector<std::string> warnings;
};

UpperBound upper_bound(const ModeContext& ctx);

// Feasibility system at target j:
//   Tr((signal_i - j noise_i) G) >= j phi_i,  Tr(power G) <= p_relay, zfc rows.
sdp::SdpProblem feasibility_problem(const ModeContext& ctx, double j);

struct BisectionResult {
  double j_max = 0.0;
  HermitianMatrix g_star;  // working (context) dimension
  int iterations = 0;
  int solves = 0;
  int retries = 0;
  int infeasible_after_retry = 0;
  double max_cert_violation = 0.0;   // over solves labeled feasible
  double min_cert_eigenvalue = 0.0;
  std::vector<std::string> warnings;
};

BisectionResult bisection(const ModeContext& ctx, double j_up, double tol,
                          double feas_tol);

struct Recovery {
  ComplexVector w;        // full n^2 dimension, scaled to relay power
  double j_lower = 0.0;   // min-SINR of w (raw, unclamped)
  std::string method;     // "principal", "randomized", or "recovery_degraded"
  int candidates_accepted = 0;
};

// g_star is in the working dimension of ctx.
Recovery recover_beamformer(const HermitianMatrix& g_star, const ModeContext& ctx,
                            const LiftedProblem& lp, int n_randomizations,
                            std::uint64_t seed);

// End-to-end solve. Throws std::invalid_argument when cfg fails validation.
MaxMinResult solve_maxmin(const NetworkConfig& cfg, const ChannelRealization& ch);

}  // namespace relaybf::maxmin
