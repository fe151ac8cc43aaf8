#pragma once

#include <vector>

#include "relaybf/linalg.hpp"

namespace relaybf::sdp::ipm {

using linalg::RealMatrix;
using linalg::RealVector;

// Conic program over one real symmetric PSD block and a bank of nonnegative
// scalars:
//
//   minimize    <c_s, X> + c_l' u
//   subject to  <a_s[k], X> + a_l[k]' u = b[k],   k = 0..m-1
//               X psd (sdim x sdim), u >= 0 (ldim)
//
// Either block may be absent (sdim == 0 or ldim == 0). All a_s[k] and c_s
// must be symmetric.
struct ConeProblem {
  int sdim = 0;
  int ldim = 0;
  RealMatrix c_s;               // sdim x sdim (ignored when sdim == 0)
  RealVector c_l;               // ldim
  std::vector<RealMatrix> a_s;  // m entries, sdim x sdim
  std::vector<RealVector> a_l;  // m entries, ldim
  RealVector b;                 // m
};

enum class IpmStatus {
  optimal,      // KKT residuals and gap below tolerance
  max_iters,    // ran out of iterations before converging
  stalled,      // step lengths collapsed before converging
  failed,       // numerical breakdown (factorization failure / NaN)
};

struct IpmOptions {
  double tol_feas = 1e-10;   // relative primal/dual residual target
  double tol_gap = 1e-10;    // relative duality gap target
  // Looser thresholds at which a stalled/max-iteration run is still accepted
  // as optimal.
  double accept_feas = 1e-8;
  double accept_gap = 1e-8;
  int max_iters = 100;
  double init_scale = 1.0;   // multiplies the identity starting point
  double step_frac = 0.98;   // fraction of the max step to the cone boundary
};

struct IpmResult {
  IpmStatus status = IpmStatus::failed;
  RealMatrix x;   // primal PSD block
  RealVector u;   // primal nonnegative block
  RealVector y;   // equality multipliers
  RealMatrix z;   // dual PSD block
  RealVector w;   // dual nonnegative block
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double rel_gap = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  int iterations = 0;
};

// Primal-dual predictor-corrector interior-point method with
// Nesterov-Todd scaling. Infeasible start from a scaled identity.
IpmResult solve(const ConeProblem& prob, const IpmOptions& opts = {});

}  // namespace relaybf::sdp::ipm
