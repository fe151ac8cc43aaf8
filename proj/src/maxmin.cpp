#include "relaybf/maxmin.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "relaybf/rng.hpp"

namespace relaybf::maxmin {

namespace {

using linalg::Complex;
using linalg::ComplexMatrix;
using sdp::Relation;
using sdp::SolveStatus;

constexpr double kScalarScreenRel = 1e-6;  // |w^H c2 w| <= rel * ||w||^2 * ||h_rr||_F
constexpr std::uint64_t kRecoverySalt = 0x7265636F76ULL;

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
      .count();
}

HermitianMatrix scaled(const HermitianMatrix& m, double a) {
  return HermitianMatrix::project(a * m.mat());
}

HermitianMatrix reduced(const ComplexMatrix& q, const HermitianMatrix& m) {
  return HermitianMatrix::project(q.adjoint() * m.mat() * q);
}

double lambda_max(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double trace_with(const HermitianMatrix& a, const HermitianMatrix& g) {
  return a.mat().cwiseProduct(g.mat().conjugate()).sum().real();
}

sdp::SolverOptions relaxed_options() {
  sdp::SolverOptions o;
  o.ipm.accept_feas = 1e-6;
  o.ipm.accept_gap = 1e-5;
  o.ipm.init_scale = 10.0;
  o.ipm.max_iters = 150;
  return o;
}

}  // namespace

ModeContext build_context(const LiftedProblem& lp) {
  ModeContext ctx;
  if (lp.mode == channel::ZfcMode::strict) {
    const ComplexMatrix& q = lp.zf_null_basis;
    if (q.cols() == 0) {
      throw std::runtime_error(
          "strict mode: zero-forcing subspace is empty (h_rr has full rank)");
    }
    ctx.dim = static_cast<int>(q.cols());
    ctx.basis = q;
    for (int i = 0; i < 2; ++i) {
      ctx.signal[i] = reduced(q, scaled(lp.h[i], lp.p_source[1 - i]));
      ctx.noise[i] = reduced(q, scaled(lp.f[i], lp.sigma2));
    }
    ctx.power = reduced(q, lp.c1);
  } else {
    ctx.dim = lp.n_w;
    for (int i = 0; i < 2; ++i) {
      ctx.signal[i] = scaled(lp.h[i], lp.p_source[1 - i]);
      ctx.noise[i] = scaled(lp.f[i], lp.sigma2);
    }
    ctx.power = lp.c1;
    ctx.zfc_rows.push_back({lp.c2_herm, Relation::eq, 0.0, 0.0});
    ctx.zfc_rows.push_back({lp.c2_skew, Relation::eq, 0.0, 0.0});
  }
  ctx.phi[0] = lp.phi[0];
  ctx.phi[1] = lp.phi[1];
  ctx.p_relay = lp.p_relay;
  return ctx;
}

UpperBound upper_bound(const ModeContext& ctx) {
  UpperBound ub;
  double j[2] = {0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    sdp::SdpProblem p;
    p.dim = ctx.dim;
    p.objective = ctx.signal[i];
    p.has_aux = true;
    p.aux_min = kAuxScalarMin;
    p.constraints.push_back({ctx.power, Relation::le, 0.0, -ctx.p_relay});
    p.constraints.push_back({ctx.noise[i], Relation::eq, 1.0, ctx.phi[i]});
    for (const sdp::TraceConstraint& c : ctx.zfc_rows) p.constraints.push_back(c);

    const sdp::SdpSolution sol = sdp::solve_linear(p);
    bool ok = (sol.status == SolveStatus::optimal);
    double denom_res = 0.0;
    if (ok) {
      denom_res = std::abs(trace_with(ctx.noise[i], sol.g) +
                           sol.aux_scalar * ctx.phi[i] - 1.0);
      if (denom_res > 1e-8) {
        ok = false;
        std::ostringstream os;
        os << "upper bound user " << (i + 1)
           << ": normalization residual " << denom_res << " too large";
        ub.warnings.push_back(os.str());
      }
    }
    if (ok) {
      j[i] = std::max(0.0, sol.objective_value);
      ub.max_denominator_residual =
          std::max(ub.max_denominator_residual, denom_res);
      ub.max_violation = std::max(ub.max_violation, sol.max_constraint_violation);
      ub.min_eigenvalue = std::min(ub.min_eigenvalue, sol.min_eigenvalue);
    } else {
      // Analytic cap: power row gives ||w||^2 <= p_relay / lambda_min(power),
      // and lambda_min(power) >= sigma2 because L_r >= sigma2 I; dropping the
      // forwarded-noise term only enlarges the ratio.
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ctx.power.mat(),
                                                      Eigen::EigenvaluesOnly);
      const double lmin = std::max(es.eigenvalues().minCoeff(), 1e-12);
      j[i] = lambda_max(ctx.signal[i]) * ctx.p_relay / (lmin * ctx.phi[i]);
      ub.fallback = true;
      std::ostringstream os;
      os << "upper bound user " << (i + 1)
         << ": solver did not converge, using analytic cap " << j[i];
      ub.warnings.push_back(os.str());
    }
  }
  ub.j_1 = j[0];
  ub.j_2 = j[1];
  ub.j_up = std::max(j[0], j[1]);
  return ub;
}

sdp::SdpProblem feasibility_problem(const ModeContext& ctx, double j) {
  sdp::SdpProblem p;
  p.dim = ctx.dim;
  for (int i = 0; i < 2; ++i) {
    p.constraints.push_back(
        {HermitianMatrix::project(ctx.signal[i].mat() - j * ctx.noise[i].mat()),
         Relation::ge, j * ctx.phi[i], 0.0});
  }
  p.constraints.push_back({ctx.power, Relation::le, ctx.p_relay, 0.0});
  for (const sdp::TraceConstraint& c : ctx.zfc_rows) p.constraints.push_back(c);
  return p;
}

BisectionResult bisection(const ModeContext& ctx, double j_up, double tol,
                          double feas_tol) {
  BisectionResult br;
  br.g_star = HermitianMatrix::project(ComplexMatrix::Zero(ctx.dim, ctx.dim));
  if (!(j_up > 0.0)) {
    br.j_max = 0.0;
    return br;
  }
  double j1 = 0.0;
  double j2 = j_up;
  bool have_g = false;
  constexpr int kHardCap = 200;
  while (j2 - j1 >= tol && br.iterations < kHardCap) {
    const double j = 0.5 * (j1 + j2);
    ++br.iterations;
    ++br.solves;
    sdp::SdpSolution sol = sdp::solve_feasibility(feasibility_problem(ctx, j), feas_tol);
    if (sol.status == SolveStatus::numerical_failure) {
      ++br.retries;
      ++br.solves;
      sol = sdp::solve_feasibility(feasibility_problem(ctx, j), feas_tol,
                                   relaxed_options());
      if (sol.status == SolveStatus::numerical_failure) {
        ++br.infeasible_after_retry;
        std::ostringstream os;
        os << "bisection: solver failed twice at j = " << j
           << "; treating as infeasible";
        br.warnings.push_back(os.str());
        sol.status = SolveStatus::infeasible;
      }
    }
    if (sol.status == SolveStatus::feasible) {
      j1 = j;
      br.g_star = sol.g;
      have_g = true;
      br.max_cert_violation =
          std::max(br.max_cert_violation, sol.max_constraint_violation);
      br.min_cert_eigenvalue =
          std::min(br.min_cert_eigenvalue, sol.min_eigenvalue);
    } else {
      j2 = j;
    }
  }
  br.j_max = j1;
  if (!have_g) {
    // Either the interval was narrower than tol from the start or no midpoint
    // was feasible; fall back to the always-feasible target j = 0 so the
    // caller still gets a usable relaxed solution.
    const sdp::SdpSolution sol =
        sdp::solve_feasibility(feasibility_problem(ctx, 0.0), feas_tol);
    ++br.solves;
    if (sol.status == SolveStatus::feasible) {
      br.g_star = sol.g;
      br.max_cert_violation =
          std::max(br.max_cert_violation, sol.max_constraint_violation);
      br.min_cert_eigenvalue =
          std::min(br.min_cert_eigenvalue, sol.min_eigenvalue);
    } else {
      br.warnings.push_back("bisection: no feasible point found at any target");
    }
  }
  return br;
}

Recovery recover_beamformer(const HermitianMatrix& g_star, const ModeContext& ctx,
                            const LiftedProblem& lp, int n_randomizations,
                            std::uint64_t seed) {
  Recovery rec;
  const int d = static_cast<int>(g_star.dim());
  const bool strict = (lp.mode == channel::ZfcMode::strict);
  if (d == 0 || g_star.mat().norm() < 1e-14) {
    rec.w = ComplexVector::Zero(lp.n_w);
    rec.method = "recovery_degraded";
    return rec;
  }
  const linalg::HermEig eig = linalg::herm_eig(g_star);
  // Square root for the randomized candidates, with eigenvalues below the
  // relative noise floor clipped so an exactly rank-one input yields exactly
  // collinear draws (sqrt would otherwise amplify machine noise to ~1e-8).
  ComplexMatrix root = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (eig.values(i) > eig.values(0) * 1e-12) {
      root += std::sqrt(eig.values(i)) * eig.vectors.col(i) *
              eig.vectors.col(i).adjoint();
    }
  }
  rng::Stream stream(seed);

  auto to_full = [&](const ComplexVector& wh) -> ComplexVector {
    return ctx.basis.size() == 0 ? wh : ComplexVector(ctx.basis * wh);
  };
  auto scale_to_power = [&](ComplexVector& w) -> bool {
    const double pr = lift::relay_power(lp, w);
    if (!(pr > 0.0)) return false;
    w *= std::sqrt(ctx.p_relay / pr);
    return true;
  };

  double best = -1.0;
  bool best_is_principal = false;
  for (int k = 0; k <= n_randomizations; ++k) {
    ComplexVector wh;
    if (k == 0) {
      wh = eig.vectors.col(0);
    } else {
      ComplexVector zeta(d);
      for (int i = 0; i < d; ++i) zeta(i) = stream.cnormal();
      wh = root * zeta;
    }
    if (wh.norm() < 1e-14) continue;
    ComplexVector w = to_full(wh);
    if (!strict) {
      const double screen = std::abs(linalg::quad_form(w, lp.c2));
      if (screen > kScalarScreenRel * w.squaredNorm() * lp.h_rr_fro) continue;
    }
    if (!scale_to_power(w)) continue;
    ++rec.candidates_accepted;
    const double val = lift::min_sinr(lp, w);
    // Keep the earlier candidate (the principal one in particular) on
    // near-ties so rank-one inputs report the principal method.
    if (val > best + std::abs(best) * 1e-12) {
      best = val;
      rec.w = w;
      best_is_principal = (k == 0);
    }
  }

  if (rec.candidates_accepted == 0) {
    // Nothing survived the scalar-mode screen: fall back to the principal
    // eigenvector, report its value honestly, and flag the outcome.
    ComplexVector w = to_full(eig.vectors.col(0));
    if (!scale_to_power(w)) {
      rec.w = ComplexVector::Zero(lp.n_w);
      rec.method = "recovery_degraded";
      return rec;
    }
    rec.w = w;
    rec.j_lower = lift::min_sinr(lp, w);
    rec.method = "recovery_degraded";
    return rec;
  }
  rec.j_lower = best;
  rec.method = best_is_principal ? "principal" : "randomized";
  return rec;
}

MaxMinResult solve_maxmin(const NetworkConfig& cfg, const ChannelRealization& ch) {
  const std::vector<std::string> violations = channel::validate_config(cfg);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "invalid config:";
    for (const std::string& v : violations) os << " [" << v << "]";
    throw std::invalid_argument(os.str());
  }

  MaxMinResult res;
  double t0 = now_ms();
  const LiftedProblem lp = lift::build_lifted(cfg, ch);
  const ModeContext ctx = build_context(lp);
  res.diag.ms_lift = now_ms() - t0;

  t0 = now_ms();
  const UpperBound ub = upper_bound(ctx);
  res.diag.ms_upper = now_ms() - t0;
  res.j_up_1 = ub.j_1;
  res.j_up_2 = ub.j_2;
  res.j_up = ub.j_up;
  res.diag.upper_bound_fallback = ub.fallback;
  res.diag.cc_denominator_residual = ub.max_denominator_residual;
  res.diag.max_cert_violation = ub.max_violation;
  res.diag.min_cert_eigenvalue = ub.min_eigenvalue;
  for (const std::string& w : ub.warnings) res.diag.warnings.push_back(w);

  t0 = now_ms();
  const BisectionResult br =
      bisection(ctx, ub.j_up, cfg.bisection_tol, cfg.feas_tol);
  res.diag.ms_bisection = now_ms() - t0;
  res.j_max = br.j_max;
  res.diag.bisection_iterations = br.iterations;
  res.diag.feasibility_solves = br.solves;
  res.diag.retries = br.retries;
  res.diag.infeasible_after_retry = br.infeasible_after_retry;
  res.diag.max_cert_violation =
      std::max(res.diag.max_cert_violation, br.max_cert_violation);
  res.diag.min_cert_eigenvalue =
      std::min(res.diag.min_cert_eigenvalue, br.min_cert_eigenvalue);
  for (const std::string& w : br.warnings) res.diag.warnings.push_back(w);

  t0 = now_ms();
  const Recovery rec =
      recover_beamformer(br.g_star, ctx, lp, kDefaultRandomizations,
                         rng::mix(cfg.seed, ch.trial_index, kRecoverySalt));
  res.diag.ms_recovery = now_ms() - t0;
  res.w = rec.w;
  res.diag.recovery_method = rec.method;
  res.diag.recovery_candidates_accepted = rec.candidates_accepted;
  res.diag.j_lower_unclamped = rec.j_lower;

  if (rec.method == "recovery_degraded") {
    // The fallback beamformer violates the zero-forcing screen, so its
    // min-SINR is not a certified achievable value for the constrained
    // problem; cap it at the relaxation optimum to keep the bound sandwich.
    res.j_lower = std::min(rec.j_lower, res.j_max);
    if (rec.j_lower > res.j_max) {
      res.diag.warnings.push_back("recovery degraded: achieved value capped at j_max");
    }
  } else {
    res.j_lower = rec.j_lower;
    if (rec.j_lower > res.j_max) {
      // The recovered beamformer is feasible, so its value is a valid lower
      // bracket: bisection's j_1 was simply tol-coarse. Tighten.
      res.j_max = rec.j_lower;
      res.diag.bracket_tightened = true;
    }
  }

  if (ctx.basis.size() == 0) {
    res.g_star = br.g_star;
  } else {
    res.g_star = HermitianMatrix::project(ctx.basis * br.g_star.mat() *
                                          ctx.basis.adjoint());
  }
  const linalg::HermEig ge = linalg::herm_eig(br.g_star);
  if (ge.values.size() >= 2 && ge.values(0) > 1e-14) {
    res.rank_ratio = std::max(0.0, ge.values(1)) / ge.values(0);
  }
  res.rate_lower_bits = std::log2(1.0 + res.j_lower);
  if (res.w.size() == lp.n_w && res.w.norm() > 0.0) {
    res.per_user_sinr = {lift::sinr(lp, res.w, 1), lift::sinr(lp, res.w, 2)};
  }
  return res;
}

}  // namespace relaybf::maxmin
