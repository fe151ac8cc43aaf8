#pragma once

#include <optional>
#include <vector>

#include "relaybf/ipm.hpp"
#include "relaybf/linalg.hpp"

namespace relaybf::sdp {

using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

enum class Relation { ge, le, eq };

// One affine constraint Tr(matrix * G) + aux_coef * aux  <relation>  rhs
// on a Hermitian PSD variable G and an optional nonnegative scalar aux.
struct TraceConstraint {
  HermitianMatrix matrix;
  Relation relation = Relation::eq;
  double rhs = 0.0;
  double aux_coef = 0.0;
};

// Complex-side problem description. When objective is set, solve_linear
// maximizes Tr(objective * G) + aux_obj * aux; solve_feasibility ignores
// the objective and instead maximizes the worst slack over the inequality
// rows. The scalar aux exists only when has_aux is true, with bound
// aux >= aux_min.
struct SdpProblem {
  int dim = 0;
  std::optional<HermitianMatrix> objective;
  double aux_obj = 0.0;
  std::vector<TraceConstraint> constraints;
  bool has_aux = false;
  double aux_min = 0.0;
};

enum class SolveStatus { optimal, feasible, infeasible, numerical_failure };

struct SdpSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  HermitianMatrix g;
  double aux_scalar = 0.0;
  double objective_value = 0.0;      // complex-side objective at g
  double slack = 0.0;                // worst-case slack t* (feasibility mode)
  double max_constraint_violation = 0.0;  // normalized by 1 + |rhs|
  double min_eigenvalue = 0.0;       // of g
  int iterations = 0;
  double rel_gap = 0.0, primal_res = 0.0, dual_res = 0.0;
};

struct SolverOptions {
  ipm::IpmOptions ipm;
  // A feasibility verdict is downgraded to numerical_failure when the
  // returned point violates constraints by more than this factor of feas_tol.
  double verify_factor = 10.0;
};

// Maximizes the minimum slack over inequality rows (equalities held exactly)
// and reports feasible iff that slack is >= -feas_tol. Infeasibility is only
// declared from a converged run (the dual multipliers then certify it);
// anything else is numerical_failure.
SdpSolution solve_feasibility(const SdpProblem& prob, double feas_tol,
                              const SolverOptions& opts = {});

// Maximizes the linear objective over the constraint set.
SdpSolution solve_linear(const SdpProblem& prob, const SolverOptions& opts = {});

struct ViolationReport {
  std::vector<double> violation;     // per constraint, >= 0, raw units
  double max_violation = 0.0;        // max over rows of violation/(1+|rhs|)
  double min_eigenvalue = 0.0;
  bool psd_ok = false;               // min eig >= -feas_tol * max(1, max eig)
  bool rows_ok = false;              // max_violation <= feas_tol
};

ViolationReport check_solution(const HermitianMatrix& g, double aux_scalar,
                               const std::vector<TraceConstraint>& constraints,
                               double feas_tol);

}  // namespace relaybf::sdp
