#include "relaybf/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "relaybf/rng.hpp"

namespace relaybf::oracle {

namespace {
constexpr double kScreenRel = 1e-6;
}

OracleResult brute_force(const LiftedProblem& lp, long n_samples,
                         std::uint64_t seed, ZfcMode mode) {
  if (n_samples < 1) {
    throw std::invalid_argument("brute_force: n_samples must be >= 1");
  }
  const bool strict = (mode == ZfcMode::strict);
  if (strict && lp.zf_null_basis.cols() == 0) {
    throw std::invalid_argument(
        "brute_force: strict mode requires a nonempty zero-forcing subspace");
  }
  OracleResult out;
  out.w_bf = ComplexVector::Zero(lp.n_w);
  rng::Stream stream(seed);
  double best = -1.0;
  for (long k = 0; k < n_samples; ++k) {
    ComplexVector w(lp.n_w);
    for (int i = 0; i < lp.n_w; ++i) w(i) = stream.cnormal();
    if (strict) {
      w = lp.zf_null_basis * (lp.zf_null_basis.adjoint() * w).eval();
      if (w.norm() < 1e-14) {
        ++out.samples_discarded;
        continue;
      }
    } else {
      const double screen = std::abs(linalg::quad_form(w, lp.c2));
      if (screen > kScreenRel * w.squaredNorm() * lp.h_rr_fro) {
        ++out.samples_discarded;
        continue;
      }
    }
    const double pr = lift::relay_power(lp, w);
    if (!(pr > 0.0)) {
      ++out.samples_discarded;
      continue;
    }
    w *= std::sqrt(lp.p_relay / pr);
    ++out.samples_used;
    const double val = lift::min_sinr(lp, w);
    if (val > best) {
      best = val;
      out.w_bf = w;
    }
  }
  if (out.samples_used == 0) {
    out.all_discarded = true;
    out.j_bf = 0.0;
  } else {
    out.j_bf = best;
  }
  return out;
}

}  // namespace relaybf::oracle
