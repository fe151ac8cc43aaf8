// End-to-end acceptance checks for the relay beamforming toolkit: quadratic
// lift identities, bound ordering, recovery tightness, bisection contract,
// random-search soundness, self-interference and power trends, solver
// certificates, deterministic reports, and runtime budgets. One verdict line
// per check; exit status is nonzero when any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "relaybf/channel.hpp"
#include "relaybf/harness.hpp"
#include "relaybf/lift.hpp"
#include "relaybf/linalg.hpp"
#include "relaybf/maxmin.hpp"
#include "relaybf/oracle.hpp"
#include "relaybf/rng.hpp"
#include "relaybf/sdp.hpp"

using namespace relaybf;
using channel::ChannelRealization;
using channel::NetworkConfig;
using channel::ZfcMode;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int g_failures = 0;

void verdict(int index, const std::string& name, bool pass,
             const std::string& detail) {
  std::printf("[%s] %2d. %s: %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

NetworkConfig base_config(int n, ZfcMode mode, double rsi_db) {
  NetworkConfig cfg;
  cfg.n = n;
  cfg.total_power = 10.0;  // 10 dBW
  cfg.rsi_db = rsi_db;
  cfg.zfc_mode = mode;
  cfg.rsi_rank = 1;
  cfg.seed = 20260823;
  return cfg;
}

// Relay weight matrix corresponding to a stacked beamforming vector.
ComplexMatrix weight_matrix(const ComplexVector& w, int n) {
  return linalg::unvec(w, n, n).adjoint();
}

// Aggregates maintained across every full solve this binary performs.
struct SolveLedger {
  int solves = 0;
  int iteration_bound_violations = 0;
  double max_cert_violation = 0.0;
  double min_cert_eigenvalue = 0.0;
  double max_cc_residual = 0.0;

  void absorb(const NetworkConfig& cfg, const maxmin::MaxMinResult& res) {
    ++solves;
    max_cert_violation = std::max(max_cert_violation, res.diag.max_cert_violation);
    min_cert_eigenvalue =
        std::min(min_cert_eigenvalue, res.diag.min_cert_eigenvalue);
    max_cc_residual = std::max(max_cc_residual, res.diag.cc_denominator_residual);
    const double tol = cfg.bisection_tol;
    if (res.j_up >= 10.0 * tol) {
      const int bound =
          static_cast<int>(std::ceil(std::log2(res.j_up / tol))) + 1;
      if (res.diag.bisection_iterations > bound) ++iteration_bound_violations;
    } else if (res.diag.bisection_iterations > 2) {
      ++iteration_bound_violations;
    }
  }
};

struct SolvedInstance {
  NetworkConfig cfg;
  ChannelRealization ch;
  double j_max = 0.0;
  double rel_gap = 0.0;
  double rank_ratio = 0.0;
  bool sandwich_ok = false;
};

}  // namespace

int main() {
  const clock_type::time_point suite_start = clock_type::now();
  namespace fs = std::filesystem;
  const fs::path outdir = "acceptance_artifacts";
  fs::create_directories(outdir);

  SolveLedger ledger;

  // ---- 1. Quadratic lift identities on 200 seeded instances ----------------
  {
    double worst = 0.0;
    rng::Stream wstream(314159);
    for (int t = 0; t < 200; ++t) {
      const int n = 2 + (t % 2);
      const NetworkConfig cfg = base_config(n, ZfcMode::scalar, -20.0);
      const ChannelRealization ch = channel::sample_realization(cfg, 1000 + t);
      const lift::LiftedProblem lp = lift::build_lifted(cfg, ch);
      ComplexVector w(lp.n_w);
      for (int i = 0; i < lp.n_w; ++i) w(i) = wstream.cnormal();
      const ComplexMatrix wm = weight_matrix(w, n);
      auto rel_err = [](double got, double want) {
        return std::abs(got - want) / (1.0 + std::abs(want));
      };
      const double power_form = linalg::real_quad_form(w, lp.c1);
      const double power_direct =
          (wm * lp.l_r.mat() * wm.adjoint()).trace().real();
      worst = std::max(worst, rel_err(power_form, power_direct));
      const ComplexVector* rx[2] = {&ch.f_r1, &ch.f_r2};
      const ComplexVector* tx[2] = {&ch.f_2r, &ch.f_1r};
      for (int u = 0; u < 2; ++u) {
        const Complex amp = rx[u]->adjoint() * wm * (*tx[u]);
        worst = std::max(
            worst, rel_err(linalg::real_quad_form(w, lp.h[u]), std::norm(amp)));
        const double row_gain = (rx[u]->adjoint() * wm).squaredNorm();
        worst = std::max(
            worst, rel_err(linalg::real_quad_form(w, lp.f[u]), row_gain));
      }
    }
    verdict(1, "quadratic lift identities (200 instances)", worst <= 1e-10,
            "worst relative error " + fmt(worst) + " vs 1e-10");
  }

  // ---- 2 & 3. Bound sandwich and tightness over the 400-instance set -------
  std::vector<SolvedInstance> batch;
  {
    int sandwich_violations = 0;
    bool medians_ok = true;
    double worst_median = 0.0;
    int rank_one_count = 0;
    double worst_rank_one_gap = 0.0;
    for (int n : {2, 3}) {
      for (double rsi : {-10.0, -40.0}) {
        const NetworkConfig cfg = base_config(n, ZfcMode::scalar, rsi);
        std::vector<double> gaps;
        for (int t = 0; t < 100; ++t) {
          SolvedInstance si;
          si.cfg = cfg;
          si.ch = channel::sample_realization(cfg, t);
          const maxmin::MaxMinResult res = maxmin::solve_maxmin(cfg, si.ch);
          ledger.absorb(cfg, res);
          si.j_max = res.j_max;
          si.rank_ratio = res.rank_ratio;
          si.rel_gap =
              (res.j_max - res.j_lower) / std::max(res.j_max, 1e-12);
          si.sandwich_ok = res.j_lower >= 0.0 &&
                           res.j_lower <= res.j_max * (1.0 + 1e-9) + 1e-12 &&
                           res.j_max <= res.j_up + 1e-6;
          if (!si.sandwich_ok) ++sandwich_violations;
          if (si.rank_ratio < 1e-6) {
            ++rank_one_count;
            worst_rank_one_gap = std::max(worst_rank_one_gap, si.rel_gap);
          }
          gaps.push_back(si.rel_gap);
          batch.push_back(si);
        }
        std::sort(gaps.begin(), gaps.end());
        const double median = 0.5 * (gaps[49] + gaps[50]);
        worst_median = std::max(worst_median, median);
        if (median > 0.05) medians_ok = false;
      }
    }
    verdict(2, "bound sandwich 0 <= j_lower <= j_max <= j_up + 1e-6 (400 instances)",
            sandwich_violations == 0,
            std::to_string(sandwich_violations) + " violations");
    const bool rank_one_ok = worst_rank_one_gap <= 1e-4;
    verdict(3, "recovery tightness (median gap per cell, rank-one exactness)",
            medians_ok && rank_one_ok,
            "worst cell median " + fmt(worst_median) + " vs 0.05; " +
                std::to_string(rank_one_count) + " near-rank-one instances, worst gap " +
                fmt(worst_rank_one_gap) + " vs 1e-4");
  }

  // ---- 4. Bisection contract: iteration bound + post-hoc bracketing --------
  {
    // Re-check brackets only where bisection actually bracketed a positive
    // level.  A sizeable share of the relaxed-mode draws force G = 0 through
    // the coupling equalities (optimum exactly 0, no search performed), and
    // probing those Slater-less systems at j_max +/- tol exercises the solver,
    // not the bisection logic.
    std::vector<const SolvedInstance*> pool;
    for (const SolvedInstance& si : batch) {
      if (si.j_max > 10.0 * si.cfg.bisection_tol) pool.push_back(&si);
    }
    const size_t stride = std::max<size_t>(1, pool.size() / 20);
    int bracket_checked = 0, bracket_failures = 0;
    for (size_t i = 0; i < pool.size() && bracket_checked < 20; i += stride) {
      const SolvedInstance& si = *pool[i];
      ++bracket_checked;
      const lift::LiftedProblem lp = lift::build_lifted(si.cfg, si.ch);
      const maxmin::ModeContext ctx = maxmin::build_context(lp);
      const double tol = si.cfg.bisection_tol;
      const sdp::SdpSolution below = sdp::solve_feasibility(
          maxmin::feasibility_problem(ctx, si.j_max - tol), si.cfg.feas_tol);
      const sdp::SdpSolution above = sdp::solve_feasibility(
          maxmin::feasibility_problem(ctx, si.j_max + 10.0 * tol),
          si.cfg.feas_tol);
      if (below.status != sdp::SolveStatus::feasible ||
          above.status != sdp::SolveStatus::infeasible) {
        ++bracket_failures;
      }
    }
    verdict(4, "bisection contract (iteration bound on every run; 20 bracket re-checks)",
            ledger.iteration_bound_violations == 0 && bracket_failures == 0,
            std::to_string(ledger.iteration_bound_violations) +
                " iteration-bound violations; " +
                std::to_string(bracket_failures) + "/" +
                std::to_string(bracket_checked) + " bracket failures");
  }

  // ---- 5. Random-search soundness on 20 exact-null-space instances ---------
  {
    int unsound = 0, competitive = 0;
    for (int t = 0; t < 20; ++t) {
      const NetworkConfig cfg = base_config(2, ZfcMode::strict, -20.0);
      const ChannelRealization ch = channel::sample_realization(cfg, t);
      const lift::LiftedProblem lp = lift::build_lifted(cfg, ch);
      const maxmin::MaxMinResult res = maxmin::solve_maxmin(cfg, ch);
      ledger.absorb(cfg, res);
      const oracle::OracleResult orc =
          oracle::brute_force(lp, 100000, rng::mix(cfg.seed, t, 5), cfg.zfc_mode);
      if (orc.j_bf > res.j_max + 1e-6) ++unsound;
      if (res.j_lower >= 0.9 * orc.j_bf) ++competitive;
    }
    verdict(5, "random-search soundness (20 instances, 1e5 samples)",
            unsound == 0 && competitive >= 16,
            std::to_string(unsound) + " search results above the ceiling; " +
                std::to_string(competitive) +
                "/20 recoveries within 10% of search");
  }

  // ---- 6 & 7. Self-interference and power trends (200-trial sweep) ---------
  harness::RunConfig trend;
  trend.base = base_config(2, ZfcMode::strict, -40.0);
  trend.base.seed = 777;
  trend.n_values = {2, 3};
  trend.rsi_levels_db = {-10, -40};
  trend.pt_grid_dbw = {0, 10, 20, 30};
  trend.trials = 200;
  const harness::SweepReport sweep = harness::run_sweep(trend);
  {
    auto cell = [&](int n, double rsi, double pt) -> const harness::CellStats& {
      for (const harness::CellStats& c : sweep.cells) {
        if (c.n == n && c.rsi_db == rsi && c.pt_dbw == pt) return c;
      }
      std::fprintf(stderr, "missing sweep cell\n");
      std::exit(2);
    };
    int rsi_violations = 0, failures = 0;
    double min_margin = 1e300;
    for (const harness::CellStats& c : sweep.cells) failures += c.failures;
    for (int n : {2, 3}) {
      for (double pt : trend.pt_grid_dbw) {
        const double margin = cell(n, -40.0, pt).mean_rate_lower -
                              cell(n, -10.0, pt).mean_rate_lower;
        min_margin = std::min(min_margin, margin);
        if (margin < 0.0) ++rsi_violations;
      }
    }
    verdict(6, "self-interference trend (-40 dB never behind -10 dB, 200 trials/cell)",
            rsi_violations == 0 && failures == 0,
            std::to_string(rsi_violations) + " violations, smallest margin " +
                fmt(min_margin) + " bits, " + std::to_string(failures) +
                " failed trials");

    int power_violations = 0;
    double worst_drop = 0.0;
    for (int n : {2, 3}) {
      for (double rsi : trend.rsi_levels_db) {
        for (size_t k = 0; k + 1 < trend.pt_grid_dbw.size(); ++k) {
          const harness::CellStats& lo = cell(n, rsi, trend.pt_grid_dbw[k]);
          const harness::CellStats& hi = cell(n, rsi, trend.pt_grid_dbw[k + 1]);
          const double sigma_mean =
              lo.std_rate_upper / std::sqrt(static_cast<double>(trend.trials));
          const double drop = lo.mean_rate_upper - hi.mean_rate_upper;
          worst_drop = std::max(worst_drop, drop);
          if (drop > sigma_mean) ++power_violations;
        }
      }
    }
    verdict(7, "power trend (mean certified rate nondecreasing within 1 sigma)",
            power_violations == 0,
            std::to_string(power_violations) + " decreasing pairs, worst drop " +
                fmt(worst_drop) + " bits");
  }

  // ---- 8. Solver certificates across every solve performed above ----------
  {
    const bool ok = ledger.max_cert_violation <= 1e-6 &&
                    ledger.min_cert_eigenvalue >= -1e-8 &&
                    ledger.max_cc_residual <= 1e-8;
    verdict(8, "solver certificates (recheck of all accepted solutions)", ok,
            std::to_string(ledger.solves) + " solves, worst violation " +
                fmt(ledger.max_cert_violation) + " vs 1e-6, min eigenvalue " +
                fmt(ledger.min_cert_eigenvalue) +
                " vs -1e-8, fractional-normalization residual " +
                fmt(ledger.max_cc_residual) + " vs 1e-8");
  }

  // ---- 9. Deterministic reports: byte-identical CSV across reruns ----------
  {
    harness::RunConfig rc;
    rc.base = base_config(2, ZfcMode::strict, -40.0);
    rc.base.seed = 4242;
    rc.n_values = {2};
    rc.rsi_levels_db = {-10, -40};
    rc.pt_grid_dbw = {0, 10};
    rc.trials = 5;
    const std::string p1 = (outdir / "determinism_a.csv").string();
    const std::string p2 = (outdir / "determinism_b.csv").string();
    const std::string p3 = (outdir / "determinism_w4.csv").string();
    harness::write_report(harness::run_sweep(rc), p1);
    harness::write_report(harness::run_sweep(rc), p2);
    rc.workers = 4;
    harness::write_report(harness::run_sweep(rc), p3);
    auto slurp = [](const std::string& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream os;
      os << in.rdbuf();
      return os.str();
    };
    const std::string a = slurp(p1), b = slurp(p2), c = slurp(p3);
    const bool ok = !a.empty() && a == b && a == c;
    verdict(9, "deterministic reports (rerun and 4-worker run byte-identical)", ok,
            ok ? "3 matching CSV files" : "byte mismatch between runs");
  }

  // ---- 10. Runtime budgets --------------------------------------------------
  {
    const NetworkConfig c2 = base_config(2, ZfcMode::scalar, -20.0);
    const ChannelRealization ch2 = channel::sample_realization(c2, 7);
    clock_type::time_point t0 = clock_type::now();
    const maxmin::MaxMinResult r2 = maxmin::solve_maxmin(c2, ch2);
    const double s2 = seconds_since(t0);
    ledger.absorb(c2, r2);

    const NetworkConfig c3 = base_config(3, ZfcMode::scalar, -20.0);
    const ChannelRealization ch3 = channel::sample_realization(c3, 7);
    t0 = clock_type::now();
    const maxmin::MaxMinResult r3 = maxmin::solve_maxmin(c3, ch3);
    const double s3 = seconds_since(t0);
    ledger.absorb(c3, r3);

    const double total = seconds_since(suite_start);
    const bool ok = s2 < 1.0 && s3 < 5.0 && total < 900.0;
    verdict(10, "runtime budget (n=2 < 1 s, n=3 < 5 s, suite < 15 min)", ok,
            "n=2 " + fmt(s2) + " s, n=3 " + fmt(s3) + " s, suite " +
                fmt(total) + " s");
  }

  std::printf("acceptance: %d/10 passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
