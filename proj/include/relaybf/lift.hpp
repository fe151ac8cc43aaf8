#pragma once

#include "relaybf/channel.hpp"
#include "relaybf/linalg.hpp"

namespace relaybf::lift {

using channel::ChannelRealization;
using channel::NetworkConfig;
using channel::ZfcMode;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::HermitianMatrix;

// Quadratic-form lift of the relay design problem onto w = vec(W^H),
// dimension n_w = n^2. With W the n x n relay weight matrix:
//
//   w^H h[i] w  = |f_ri^H W f_{3-i,r}|^2     (signal power, unscaled)
//   w^H f[i] w  = ||f_ri^H W||^2             (forwarded-noise gain, unscaled)
//   w^H c1   w  = Tr(W L_r W^H)              (relay transmit power)
//   w^H c2   w  = Tr(W h_rr^H W^H)           (self-interference coupling)
//   w^H z    w  = ||W h_rr||_F^2
//
// where L_r = p1 f_1r f_1r^H + p2 f_2r f_2r^H + sigma2 I.
//
// User i's SINR applies the physical scale factors on top of the raw lifts:
//   sinr_i(w) = p_{3-i} (w^H h[i] w) / (sigma2 (w^H f[i] w) + phi[i]),
//   phi_i = p_i |f_ii|^2 + sigma2.
struct LiftedProblem {
  int n = 0;    // relay antennas
  int n_w = 0;  // n^2

  HermitianMatrix h[2];  // index 0 -> user 1, 1 -> user 2
  HermitianMatrix f[2];
  HermitianMatrix c1;
  ComplexMatrix c2;          // I_n (x) h_rr^H, not Hermitian in general
  HermitianMatrix c2_herm;   // (c2 + c2^H)/2
  HermitianMatrix c2_skew;   // (c2 - c2^H)/(2i)
  HermitianMatrix z;         // c2^H c2 = I_n (x) (h_rr h_rr^H)
  HermitianMatrix l_r;

  double phi[2] = {0.0, 0.0};
  double p_source[2] = {0.0, 0.0};  // p1, p2
  double sigma2 = 1.0;
  double p_relay = 0.0;
  double h_rr_fro = 0.0;  // ||h_rr||_F, scale for the scalar-mode screen

  ZfcMode mode = ZfcMode::scalar;
  // Orthonormal basis of the exact zero-forcing subspace
  // {w : w^H z w = 0} = range(I_n (x) null(h_rr^H)); n_w x n*(n - rank).
  // Empty (n_w x 0) when h_rr has full rank.
  ComplexMatrix zf_null_basis;
};

LiftedProblem build_lifted(const NetworkConfig& cfg, const ChannelRealization& ch);

// user is 1 or 2 below.
double sinr(const LiftedProblem& lp, const ComplexVector& w, int user);
double rate(const LiftedProblem& lp, const ComplexVector& w, int user);  // log2(1+sinr)
double min_sinr(const LiftedProblem& lp, const ComplexVector& w);
double relay_power(const LiftedProblem& lp, const ComplexVector& w);

// Mode-appropriate zero-forcing residual of a candidate beamformer:
// scalar mode:  |w^H c2 w|            (what the recovery screen thresholds)
// strict mode:  sqrt(w^H z w) = ||W h_rr||_F
double zfc_residual(const LiftedProblem& lp, const ComplexVector& w);

}  // namespace relaybf::lift
