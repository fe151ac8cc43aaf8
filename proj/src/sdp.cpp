#include "relaybf/sdp.hpp"

#include <cmath>
#include <stdexcept>

namespace relaybf::sdp {

namespace {

using linalg::RealMatrix;
using linalg::RealVector;

// The complex problem is embedded into the real symmetric cone via
// A -> [[Re A, -Im A], [Im A, Re A]], which doubles every trace functional:
// <embed(A), embed(G)> = 2 Tr(A G). Constraint rows therefore carry doubled
// rhs and aux coefficients. The map back (averaging the two diagonal and
// the two off-diagonal blocks) is exact on all trace functionals of interest
// because every embedded data matrix commutes with the block rotation
// J = [[0, -I], [I, 0]].
struct Assembled {
  ipm::ConeProblem cone;
  int idx_aux = -1;   // position of the shifted aux variable in u
  int idx_tau = -1;     // position of the slack variable tau (feasibility)
  double that_min = 0.0;  // lower end of the boxed slack, embedded scale
};

void validate(const SdpProblem& prob, bool need_objective) {
  if (prob.dim < 1) throw std::invalid_argument("sdp: dim must be >= 1");
  if (prob.constraints.empty()) {
    throw std::invalid_argument("sdp: at least one constraint required");
  }
  for (const TraceConstraint& c : prob.constraints) {
    if (c.matrix.dim() != prob.dim) {
      throw std::invalid_argument("sdp: constraint dimension mismatch");
    }
    if (!std::isfinite(c.rhs) || !std::isfinite(c.aux_coef)) {
      throw std::invalid_argument("sdp: non-finite constraint data");
    }
    if (c.aux_coef != 0.0 && !prob.has_aux) {
      throw std::invalid_argument("sdp: aux coefficient without has_aux");
    }
  }
  if (need_objective && !prob.objective.has_value()) {
    throw std::invalid_argument("sdp: objective required");
  }
  if (prob.objective && prob.objective->dim() != prob.dim) {
    throw std::invalid_argument("sdp: objective dimension mismatch");
  }
}

Assembled build(const SdpProblem& prob, bool feasibility_mode) {
  const int sdim = 2 * prob.dim;
  const int m_rows = static_cast<int>(prob.constraints.size());
  int n_ineq = 0;
  for (const TraceConstraint& c : prob.constraints) {
    if (c.relation != Relation::eq) ++n_ineq;
  }
  if (feasibility_mode && n_ineq == 0) {
    throw std::invalid_argument("sdp: feasibility mode needs at least one inequality");
  }

  Assembled out;
  int nl = 0;
  if (prob.has_aux) out.idx_aux = nl++;
  if (feasibility_mode) out.idx_tau = nl++;
  const int idx_slack0 = nl;
  nl += n_ineq;
  const int idx_box = feasibility_mode ? nl++ : -1;

  // Embedded-scale rhs per row and the bound B used to size the tau box.
  std::vector<double> rhat(static_cast<size_t>(m_rows));
  double bmax = 0.0;
  for (int k = 0; k < m_rows; ++k) {
    const TraceConstraint& c = prob.constraints[static_cast<size_t>(k)];
    rhat[static_cast<size_t>(k)] = 2.0 * c.rhs - 2.0 * c.aux_coef * prob.aux_min;
    if (c.relation != Relation::eq) {
      bmax = std::max(bmax, std::abs(rhat[static_cast<size_t>(k)]));
    }
  }
  // With that_min this low, a vanishing G satisfies every inequality row
  // strictly, so the slack-maximization always has an interior point.
  out.that_min = -(2.0 * bmax + 1.0);
  const double that_max = 4.0 * std::max(1.0, bmax);

  ipm::ConeProblem& cp = out.cone;
  cp.sdim = sdim;
  cp.ldim = nl;
  cp.c_s = RealMatrix::Zero(sdim, sdim);
  cp.c_l = RealVector::Zero(nl);
  if (feasibility_mode) {
    cp.c_l(out.idx_tau) = -1.0;  // maximize tau
  } else {
    cp.c_s = -0.5 * linalg::embed_real(*prob.objective);
    if (prob.has_aux) cp.c_l(out.idx_aux) = -prob.aux_obj;
  }

  const int total_rows = m_rows + (feasibility_mode ? 1 : 0);
  cp.a_s.resize(static_cast<size_t>(total_rows));
  cp.a_l.resize(static_cast<size_t>(total_rows));
  cp.b = RealVector::Zero(total_rows);

  int slack_k = 0;
  for (int k = 0; k < m_rows; ++k) {
    const TraceConstraint& c = prob.constraints[static_cast<size_t>(k)];
    RealMatrix a = linalg::embed_real(c.matrix);
    RealVector al = RealVector::Zero(nl);
    double b = rhat[static_cast<size_t>(k)];
    if (prob.has_aux && c.aux_coef != 0.0) {
      al(out.idx_aux) = 2.0 * c.aux_coef;
    }
    if (c.relation == Relation::ge) {
      al(idx_slack0 + slack_k++) = -1.0;
      if (feasibility_mode) {
        al(out.idx_tau) = -1.0;
        b += out.that_min;
      }
    } else if (c.relation == Relation::le) {
      al(idx_slack0 + slack_k++) = 1.0;
      if (feasibility_mode) {
        al(out.idx_tau) = 1.0;
        b -= out.that_min;
      }
    }
    // Normalize the row so every constraint is O(1) for the solver; this is
    // an exact reformulation (tau keeps its original-units meaning).
    const double scale =
        std::max(1.0, std::sqrt(a.squaredNorm() + al.squaredNorm()));
    cp.a_s[static_cast<size_t>(k)] = a / scale;
    cp.a_l[static_cast<size_t>(k)] = al / scale;
    cp.b(k) = b / scale;
  }
  if (feasibility_mode) {
    RealVector al = RealVector::Zero(nl);
    al(out.idx_tau) = 1.0;
    al(idx_box) = 1.0;
    cp.a_s[static_cast<size_t>(m_rows)] = RealMatrix::Zero(sdim, sdim);
    cp.a_l[static_cast<size_t>(m_rows)] = al;
    cp.b(m_rows) = that_max - out.that_min;
  }
  return out;
}

ipm::IpmResult run_with_retry(const ipm::ConeProblem& cp, ipm::IpmOptions o) {
  ipm::IpmResult r = ipm::solve(cp, o);
  if (r.status == ipm::IpmStatus::optimal) return r;
  o.init_scale *= 100.0;
  o.max_iters *= 2;
  ipm::IpmResult r2 = ipm::solve(cp, o);
  if (r2.status == ipm::IpmStatus::optimal) return r2;
  const double e1 = std::max({r.primal_res, r.dual_res, r.rel_gap});
  const double e2 = std::max({r2.primal_res, r2.dual_res, r2.rel_gap});
  return (e2 < e1) ? r2 : r;
}

void map_back(const SdpProblem& prob, const Assembled& as,
              const ipm::IpmResult& ir, double feas_tol, SdpSolution& sol) {
  sol.iterations = ir.iterations;
  sol.rel_gap = ir.rel_gap;
  sol.primal_res = ir.primal_res;
  sol.dual_res = ir.dual_res;
  sol.g = linalg::unembed_real(ir.x);
  sol.aux_scalar = prob.has_aux ? prob.aux_min + ir.u(as.idx_aux) : 0.0;
  if (prob.objective) {
    sol.objective_value =
        prob.objective->mat().cwiseProduct(sol.g.mat().conjugate()).sum().real() +
        prob.aux_obj * sol.aux_scalar;
  }
  const ViolationReport vr =
      check_solution(sol.g, sol.aux_scalar, prob.constraints, feas_tol);
  sol.max_constraint_violation = vr.max_violation;
  sol.min_eigenvalue = vr.min_eigenvalue;
}

}  // namespace

SdpSolution solve_feasibility(const SdpProblem& prob, double feas_tol,
                              const SolverOptions& opts) {
  validate(prob, /*need_objective=*/false);
  const Assembled as = build(prob, /*feasibility_mode=*/true);
  const ipm::IpmResult ir = run_with_retry(as.cone, opts.ipm);
  SdpSolution sol;
  if (ir.status != ipm::IpmStatus::optimal) {
    sol.status = SolveStatus::numerical_failure;
    sol.iterations = ir.iterations;
    sol.rel_gap = ir.rel_gap;
    sol.primal_res = ir.primal_res;
    sol.dual_res = ir.dual_res;
    return sol;
  }
  map_back(prob, as, ir, feas_tol, sol);
  sol.slack = 0.5 * (as.that_min + ir.u(as.idx_tau));
  if (sol.slack >= -feas_tol) {
    // The claimed verdict must survive an independent recheck of the mapped
    // point; equalities get the same slack allowance the verdict promises.
    const double tol_line = std::max(feas_tol, -sol.slack);
    if (sol.max_constraint_violation <= opts.verify_factor *
            std::max(tol_line, 1e-9)) {
      sol.status = SolveStatus::feasible;
    } else {
      sol.status = SolveStatus::numerical_failure;
    }
  } else {
    // Converged run with negative worst-case slack: the dual multipliers of
    // the slack program certify that no PSD point attains slack >= 0.
    sol.status = SolveStatus::infeasible;
  }
  return sol;
}

SdpSolution solve_linear(const SdpProblem& prob, const SolverOptions& opts) {
  validate(prob, /*need_objective=*/true);
  const Assembled as = build(prob, /*feasibility_mode=*/false);
  const ipm::IpmResult ir = run_with_retry(as.cone, opts.ipm);
  SdpSolution sol;
  if (ir.status != ipm::IpmStatus::optimal) {
    sol.status = SolveStatus::numerical_failure;
    sol.iterations = ir.iterations;
    sol.rel_gap = ir.rel_gap;
    sol.primal_res = ir.primal_res;
    sol.dual_res = ir.dual_res;
    return sol;
  }
  map_back(prob, as, ir, /*feas_tol=*/1e-8, sol);
  sol.status = SolveStatus::optimal;
  return sol;
}

ViolationReport check_solution(const HermitianMatrix& g, double aux_scalar,
                               const std::vector<TraceConstraint>& constraints,
                               double feas_tol) {
  ViolationReport vr;
  vr.violation.reserve(constraints.size());
  double worst = 0.0;
  for (const TraceConstraint& c : constraints) {
    const double v =
        c.matrix.mat().cwiseProduct(g.mat().conjugate()).sum().real() +
        c.aux_coef * aux_scalar;
    double raw = 0.0;
    switch (c.relation) {
      case Relation::eq: raw = std::abs(v - c.rhs); break;
      case Relation::ge: raw = std::max(0.0, c.rhs - v); break;
      case Relation::le: raw = std::max(0.0, v - c.rhs); break;
    }
    vr.violation.push_back(raw);
    worst = std::max(worst, raw / (1.0 + std::abs(c.rhs)));
  }
  vr.max_violation = worst;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g.mat(), Eigen::EigenvaluesOnly);
  vr.min_eigenvalue = es.eigenvalues().minCoeff();
  const double max_eig = es.eigenvalues().maxCoeff();
  vr.psd_ok = vr.min_eigenvalue >= -feas_tol * std::max(1.0, max_eig);
  vr.rows_ok = vr.max_violation <= feas_tol;
  return vr;
}

}  // namespace relaybf::sdp
