#include "relaybf/lift.hpp"

#include <cmath>
#include <stdexcept>

namespace relaybf::lift {

using linalg::kron;

LiftedProblem build_lifted(const NetworkConfig& cfg, const ChannelRealization& ch) {
  const int n = cfg.n;
  if (ch.f_1r.size() != n || ch.h_rr.rows() != n || ch.h_rr.cols() != n) {
    throw std::invalid_argument("build_lifted: realization does not match cfg.n");
  }
  LiftedProblem lp;
  lp.n = n;
  lp.n_w = n * n;
  lp.sigma2 = cfg.sigma2;
  lp.p_relay = cfg.relay_budget();
  lp.p_source[0] = cfg.source_power(1);
  lp.p_source[1] = cfg.source_power(2);
  lp.mode = cfg.zfc_mode;

  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexVector* up[2] = {&ch.f_1r, &ch.f_2r};    // user -> relay
  const ComplexVector* down[2] = {&ch.f_r1, &ch.f_r2};  // relay -> user

  for (int i = 0; i < 2; ++i) {
    const ComplexVector& f_ri = *down[i];
    const ComplexVector& f_other = *up[1 - i];
    const ComplexMatrix outer_ri = f_ri.conjugate() * f_ri.transpose();
    lp.h[i] = HermitianMatrix::project(kron(outer_ri, f_other * f_other.adjoint()));
    lp.f[i] = HermitianMatrix::project(kron(outer_ri, eye));
  }

  ComplexMatrix l_r = cfg.sigma2 * eye;
  l_r += lp.p_source[0] * (ch.f_1r * ch.f_1r.adjoint());
  l_r += lp.p_source[1] * (ch.f_2r * ch.f_2r.adjoint());
  lp.l_r = HermitianMatrix::project(l_r);
  lp.c1 = HermitianMatrix::project(kron(eye, l_r));

  lp.c2 = kron(eye, ch.h_rr.adjoint());
  lp.c2_herm = HermitianMatrix::project(0.5 * (lp.c2 + lp.c2.adjoint()));
  lp.c2_skew = HermitianMatrix::project(
      (lp.c2 - lp.c2.adjoint()) / Complex(0.0, 2.0));
  lp.z = HermitianMatrix::project(kron(eye, ch.h_rr * ch.h_rr.adjoint()));

  const double phi_scalar[2] = {std::norm(ch.f_11), std::norm(ch.f_22)};
  for (int i = 0; i < 2; ++i) {
    lp.phi[i] = lp.p_source[i] * phi_scalar[i] + cfg.sigma2;
  }
  lp.h_rr_fro = ch.h_rr.norm();

  const ComplexMatrix v_null = linalg::null_space_basis(
      HermitianMatrix::project(ch.h_rr * ch.h_rr.adjoint()));
  lp.zf_null_basis = kron(eye, v_null);
  return lp;
}

double sinr(const LiftedProblem& lp, const ComplexVector& w, int user) {
  const int i = user - 1;
  if (i < 0 || i > 1) throw std::invalid_argument("sinr: user must be 1 or 2");
  const double signal =
      lp.p_source[1 - i] * linalg::real_quad_form(w, lp.h[i]);
  const double noise =
      lp.sigma2 * linalg::real_quad_form(w, lp.f[i]) + lp.phi[i];
  return std::max(signal, 0.0) / noise;
}

double rate(const LiftedProblem& lp, const ComplexVector& w, int user) {
  return std::log2(1.0 + sinr(lp, w, user));
}

double min_sinr(const LiftedProblem& lp, const ComplexVector& w) {
  return std::min(sinr(lp, w, 1), sinr(lp, w, 2));
}

double relay_power(const LiftedProblem& lp, const ComplexVector& w) {
  return linalg::real_quad_form(w, lp.c1);
}

double zfc_residual(const LiftedProblem& lp, const ComplexVector& w) {
  if (lp.mode == ZfcMode::strict) {
    return std::sqrt(std::max(0.0, linalg::real_quad_form(w, lp.z)));
  }
  return std::abs(linalg::quad_form(w, lp.c2));
}

}  // namespace relaybf::lift
