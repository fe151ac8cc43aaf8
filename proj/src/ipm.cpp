#include "relaybf/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaybf::sdp::ipm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nesterov-Todd scaling of the current iterate. For the PSD block, with
// Cholesky factors X = Lx Lx', Z = Lz Lz' and the SVD Lz' Lx = U diag(l) V',
// the scaling matrix is r = Lz^{-T} U diag(sqrt(l)); then
// r^{-1} X r^{-T} = r' Z r = diag(l), the scaled point. For the nonnegative
// block the analogue is d = sqrt(u/w) with scaled point sqrt(u*w).
struct Scaling {
  RealMatrix r, rinv;
  RealVector lambda_s;
  RealVector d, lambda_l;
  bool ok = false;
};

Scaling compute_scaling(const RealMatrix& x, const RealMatrix& z,
                        const RealVector& u, const RealVector& w) {
  Scaling sc;
  const Eigen::Index s = x.rows();
  if (s > 0) {
    Eigen::LLT<RealMatrix> lltx(x), lltz(z);
    if (lltx.info() != Eigen::Success || lltz.info() != Eigen::Success) {
      return sc;
    }
    const RealMatrix lx = lltx.matrixL();
    const RealMatrix lz = lltz.matrixL();
    Eigen::JacobiSVD<RealMatrix> svd(lz.transpose() * lx,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
    sc.lambda_s = svd.singularValues();
    if (!(sc.lambda_s.minCoeff() > 0.0)) return sc;
    const RealVector sq = sc.lambda_s.cwiseSqrt();
    const RealMatrix lztinv_u =
        lz.transpose().triangularView<Eigen::Upper>().solve(svd.matrixU());
    sc.r = lztinv_u * sq.asDiagonal();
    sc.rinv = sq.cwiseInverse().asDiagonal() * svd.matrixU().transpose() *
              lz.transpose();
  }
  const Eigen::Index l = u.size();
  if (l > 0) {
    if (!(u.minCoeff() > 0.0) || !(w.minCoeff() > 0.0)) return sc;
    sc.d = (u.array() / w.array()).sqrt().matrix();
    sc.lambda_l = (u.array() * w.array()).sqrt().matrix();
  }
  sc.ok = true;
  return sc;
}

// Largest step a with lam + a*delta psd, for symmetric delta in the scaled
// space where the current point is diag(lam).
double max_step_sdp(const RealVector& lam, const RealMatrix& delta) {
  if (lam.size() == 0) return kInf;
  const RealVector isq = lam.cwiseSqrt().cwiseInverse();
  RealMatrix m = isq.asDiagonal() * delta * isq.asDiagonal();
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return 0.0;
  const double mn = es.eigenvalues().minCoeff();
  return (mn >= 0.0) ? kInf : -1.0 / mn;
}

double max_step_lp(const RealVector& lam, const RealVector& delta) {
  double a = kInf;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (delta(i) < 0.0) a = std::min(a, -lam(i) / delta(i));
  }
  return a;
}

struct Directions {
  RealMatrix dx, dz;  // scaled-space PSD directions
  RealVector du, dw;  // scaled-space nonnegative directions
  RealVector dy;
};

}  // namespace

IpmResult solve(const ConeProblem& prob, const IpmOptions& opts) {
  const int s = prob.sdim;
  const int l = prob.ldim;
  const int m = static_cast<int>(prob.b.size());
  if (m == 0 || (s == 0 && l == 0)) {
    throw std::invalid_argument("ipm::solve: empty problem");
  }
  if (static_cast<int>(prob.a_s.size()) != m || static_cast<int>(prob.a_l.size()) != m) {
    throw std::invalid_argument("ipm::solve: constraint count mismatch");
  }
  const double nu = static_cast<double>(s + l);

  IpmResult res;
  // Infeasible start from scaled identities.
  const double cmax =
      std::max(s > 0 ? prob.c_s.cwiseAbs().maxCoeff() : 0.0,
               l > 0 ? prob.c_l.cwiseAbs().maxCoeff() : 0.0);
  const double eta = opts.init_scale * std::max(1.0, prob.b.cwiseAbs().maxCoeff());
  const double zeta = opts.init_scale * std::max(1.0, cmax);
  RealMatrix x = RealMatrix::Identity(s, s) * eta;
  RealMatrix z = RealMatrix::Identity(s, s) * zeta;
  RealVector u = RealVector::Constant(l, eta);
  RealVector w = RealVector::Constant(l, zeta);
  RealVector y = RealVector::Zero(m);

  const double bnorm = prob.b.norm();
  const double cnorm = std::sqrt((s > 0 ? prob.c_s.squaredNorm() : 0.0) +
                                 (l > 0 ? prob.c_l.squaredNorm() : 0.0));

  // Per-iteration workspace.
  RealVector r_p(m), r_dl(l), q(m);
  RealMatrix r_d(s, s), rd_t(s, s), gamma(s, s), target_s(s, s);
  std::vector<RealMatrix> at(static_cast<size_t>(m));
  std::vector<RealVector> alt(static_cast<size_t>(m));
  RealMatrix schur(m, m);
  Directions aff, comb;

  IpmStatus exit_status = IpmStatus::max_iters;
  int stalls = 0;

  // A scaling or factorization breakdown right at the optimal face (the
  // complementarity products already at machine precision make x or z
  // numerically singular) leaves the current iterate intact with freshly
  // measured residuals; such exits are accepted on the same terms as
  // stalled runs.
  const auto near_converged = [&res, &opts] {
    return res.primal_res <= opts.accept_feas &&
           res.dual_res <= opts.accept_feas && res.rel_gap <= opts.accept_gap;
  };

  for (int iter = 0;; ++iter) {
    // ---- residuals and convergence test ----
    for (int k = 0; k < m; ++k) {
      double ax = (s > 0) ? (prob.a_s[static_cast<size_t>(k)].cwiseProduct(x)).sum() : 0.0;
      if (l > 0) ax += prob.a_l[static_cast<size_t>(k)].dot(u);
      r_p(k) = prob.b(k) - ax;
    }
    if (s > 0) {
      r_d = prob.c_s - z;
      for (int k = 0; k < m; ++k) r_d -= y(k) * prob.a_s[static_cast<size_t>(k)];
    }
    if (l > 0) {
      r_dl = prob.c_l - w;
      for (int k = 0; k < m; ++k) r_dl -= y(k) * prob.a_l[static_cast<size_t>(k)];
    }
    const double gap = ((s > 0) ? x.cwiseProduct(z).sum() : 0.0) +
                       ((l > 0) ? u.dot(w) : 0.0);
    const double mu = gap / nu;
    const double pobj = ((s > 0) ? prob.c_s.cwiseProduct(x).sum() : 0.0) +
                        ((l > 0) ? prob.c_l.dot(u) : 0.0);
    const double dobj = prob.b.dot(y);
    res.primal_res = r_p.norm() / (1.0 + bnorm);
    res.dual_res =
        std::sqrt(((s > 0) ? r_d.squaredNorm() : 0.0) +
                  ((l > 0) ? r_dl.squaredNorm() : 0.0)) /
        (1.0 + cnorm);
    res.rel_gap = gap / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));
    res.primal_obj = pobj;
    res.dual_obj = dobj;
    res.iterations = iter;

    if (!std::isfinite(mu) || !std::isfinite(res.primal_res) ||
        !std::isfinite(res.dual_res)) {
      exit_status = IpmStatus::failed;
      break;
    }
    if (res.primal_res <= opts.tol_feas && res.dual_res <= opts.tol_feas &&
        res.rel_gap <= opts.tol_gap) {
      exit_status = IpmStatus::optimal;
      break;
    }
    if (iter >= opts.max_iters) {
      exit_status = IpmStatus::max_iters;
      break;
    }

    // ---- NT scaling ----
    const Scaling sc = compute_scaling(x, z, u, w);
    if (!sc.ok) {
      exit_status = near_converged() ? IpmStatus::optimal : IpmStatus::failed;
      break;
    }
    for (int k = 0; k < m; ++k) {
      if (s > 0) {
        at[static_cast<size_t>(k)] =
            sc.r.transpose() * prob.a_s[static_cast<size_t>(k)] * sc.r;
        at[static_cast<size_t>(k)] =
            0.5 * (at[static_cast<size_t>(k)] + at[static_cast<size_t>(k)].transpose());
      }
      if (l > 0) {
        alt[static_cast<size_t>(k)] =
            sc.d.cwiseProduct(prob.a_l[static_cast<size_t>(k)]);
      }
    }
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j <= k; ++j) {
        double v = 0.0;
        if (s > 0) {
          v += at[static_cast<size_t>(k)].cwiseProduct(at[static_cast<size_t>(j)]).sum();
        }
        if (l > 0) v += alt[static_cast<size_t>(k)].dot(alt[static_cast<size_t>(j)]);
        schur(k, j) = v;
        schur(j, k) = v;
      }
    }
    Eigen::LDLT<RealMatrix> mfac(schur);
    if (mfac.info() != Eigen::Success) {
      exit_status = near_converged() ? IpmStatus::optimal : IpmStatus::failed;
      break;
    }
    if (s > 0) {
      rd_t = sc.r.transpose() * r_d * sc.r;
      rd_t = 0.5 * (rd_t + rd_t.transpose());
      for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = 0; j < s; ++j) {
          gamma(i, j) = 2.0 / (sc.lambda_s(i) + sc.lambda_s(j));
        }
      }
    }
    const RealVector rdl_t = (l > 0) ? RealVector(sc.d.cwiseProduct(r_dl)) : RealVector();

    // Solves the scaled KKT system for complementarity targets
    // (target_s, target_l); reuses the factored Schur complement.
    auto solve_dir = [&](const RealMatrix& tgt_s, const RealVector& tgt_l,
                         Directions& dir) {
      for (int k = 0; k < m; ++k) {
        double v = 0.0;
        if (s > 0) {
          v += at[static_cast<size_t>(k)]
                   .cwiseProduct(gamma.cwiseProduct(tgt_s) - rd_t)
                   .sum();
        }
        if (l > 0) {
          v += alt[static_cast<size_t>(k)].dot(
              (tgt_l.array() / sc.lambda_l.array()).matrix() - rdl_t);
        }
        q(k) = v;
      }
      const RealVector rhs = r_p - q;
      dir.dy = mfac.solve(rhs);
      dir.dy += mfac.solve(rhs - schur * dir.dy);  // one refinement step
      if (s > 0) {
        dir.dz = rd_t;
        for (int k = 0; k < m; ++k) dir.dz -= dir.dy(k) * at[static_cast<size_t>(k)];
        dir.dx = gamma.cwiseProduct(tgt_s) - dir.dz;
      }
      if (l > 0) {
        dir.dw = rdl_t;
        for (int k = 0; k < m; ++k) dir.dw -= dir.dy(k) * alt[static_cast<size_t>(k)];
        dir.du = (tgt_l.array() / sc.lambda_l.array()).matrix() - dir.dw;
      }
    };

    // ---- predictor ----
    if (s > 0) {
      target_s = RealMatrix(
          (-sc.lambda_s.cwiseProduct(sc.lambda_s)).asDiagonal());
    }
    const RealVector target_l_aff =
        (l > 0) ? RealVector(-sc.lambda_l.cwiseProduct(sc.lambda_l)) : RealVector();
    solve_dir(target_s, target_l_aff, aff);

    double ap = kInf, ad = kInf;
    if (s > 0) {
      ap = std::min(ap, max_step_sdp(sc.lambda_s, aff.dx));
      ad = std::min(ad, max_step_sdp(sc.lambda_s, aff.dz));
    }
    if (l > 0) {
      ap = std::min(ap, max_step_lp(sc.lambda_l, aff.du));
      ad = std::min(ad, max_step_lp(sc.lambda_l, aff.dw));
    }
    const double a_aff = std::min({1.0, ap, ad});
    double gap_aff = 0.0;
    if (s > 0) {
      const RealMatrix xs = RealMatrix(sc.lambda_s.asDiagonal()) + a_aff * aff.dx;
      const RealMatrix zs = RealMatrix(sc.lambda_s.asDiagonal()) + a_aff * aff.dz;
      gap_aff += xs.cwiseProduct(zs).sum();
    }
    if (l > 0) {
      gap_aff += (sc.lambda_l + a_aff * aff.du).dot(sc.lambda_l + a_aff * aff.dw);
    }
    const double mu_aff = std::max(gap_aff, 0.0) / nu;
    double sigma = std::pow(mu_aff / mu, 3.0);
    sigma = std::clamp(sigma, 1e-8, 1.0);

    // ---- corrector / combined direction ----
    if (s > 0) {
      const RealMatrix cross = aff.dx * aff.dz;
      target_s = sigma * mu * RealMatrix::Identity(s, s) -
                 RealMatrix(sc.lambda_s.cwiseProduct(sc.lambda_s).asDiagonal()) -
                 0.5 * (cross + cross.transpose());
    }
    RealVector target_l;
    if (l > 0) {
      target_l = RealVector::Constant(l, sigma * mu) -
                 sc.lambda_l.cwiseProduct(sc.lambda_l) -
                 aff.du.cwiseProduct(aff.dw);
    }
    solve_dir(target_s, target_l, comb);

    double ap_max = kInf, ad_max = kInf;
    if (s > 0) {
      ap_max = std::min(ap_max, max_step_sdp(sc.lambda_s, comb.dx));
      ad_max = std::min(ad_max, max_step_sdp(sc.lambda_s, comb.dz));
    }
    if (l > 0) {
      ap_max = std::min(ap_max, max_step_lp(sc.lambda_l, comb.du));
      ad_max = std::min(ad_max, max_step_lp(sc.lambda_l, comb.dw));
    }
    const double a_p = std::min(1.0, opts.step_frac * ap_max);
    const double a_d = std::min(1.0, opts.step_frac * ad_max);
    if (std::max(a_p, a_d) < 1e-8) {
      if (++stalls >= 2) {
        exit_status = IpmStatus::stalled;
        break;
      }
    } else {
      stalls = 0;
    }

    // ---- update (map scaled directions back) ----
    if (s > 0) {
      RealMatrix dx = sc.r * comb.dx * sc.r.transpose();
      RealMatrix dz = sc.rinv.transpose() * comb.dz * sc.rinv;
      x += a_p * 0.5 * (dx + dx.transpose());
      z += a_d * 0.5 * (dz + dz.transpose());
    }
    if (l > 0) {
      u += a_p * sc.d.cwiseProduct(comb.du);
      w += a_d * comb.dw.cwiseQuotient(sc.d);
    }
    y += a_d * comb.dy;
    if ((s > 0 && !x.allFinite()) || (l > 0 && !u.allFinite()) || !y.allFinite()) {
      exit_status = IpmStatus::failed;
      break;
    }
    if ((s > 0 && x.norm() > 1e14) || (l > 0 && u.norm() > 1e14)) {
      exit_status = IpmStatus::failed;  // iterate diverged (e.g. unbounded problem)
      break;
    }
  }

  // Accept near-converged runs that could not make further progress.
  if (exit_status != IpmStatus::optimal && exit_status != IpmStatus::failed &&
      res.primal_res <= opts.accept_feas && res.dual_res <= opts.accept_feas &&
      res.rel_gap <= opts.accept_gap) {
    exit_status = IpmStatus::optimal;
  }

  res.status = exit_status;
  res.x = x;
  res.u = u;
  res.y = y;
  res.z = z;
  res.w = w;
  return res;
}

}  // namespace relaybf::sdp::ipm
