#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "relaybf/harness.hpp"
#include "relaybf/maxmin.hpp"

namespace {

using nlohmann::json;
using relaybf::harness::RunConfig;

constexpr int kExitValidation = 2;
constexpr int kExitDegraded = 3;

json complex_vector_json(const relaybf::linalg::ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back({v(i).real(), v(i).imag()});
  }
  return out;
}

json complex_matrix_json(const relaybf::linalg::ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    out.push_back(row);
  }
  return out;
}

json result_json(const relaybf::maxmin::MaxMinResult& res) {
  json j;
  j["j_up"] = res.j_up;
  j["j_up_1"] = res.j_up_1;
  j["j_up_2"] = res.j_up_2;
  j["j_max"] = res.j_max;
  j["j_lower"] = res.j_lower;
  j["rank_ratio"] = res.rank_ratio;
  j["rate_lower_bits"] = res.rate_lower_bits;
  j["per_user_sinr"] = {res.per_user_sinr[0], res.per_user_sinr[1]};
  j["w"] = complex_vector_json(res.w);
  j["g_star"] = complex_matrix_json(res.g_star.mat());
  json d;
  d["bisection_iterations"] = res.diag.bisection_iterations;
  d["feasibility_solves"] = res.diag.feasibility_solves;
  d["retries"] = res.diag.retries;
  d["infeasible_after_retry"] = res.diag.infeasible_after_retry;
  d["upper_bound_fallback"] = res.diag.upper_bound_fallback;
  d["bracket_tightened"] = res.diag.bracket_tightened;
  d["recovery_method"] = res.diag.recovery_method;
  d["recovery_candidates_accepted"] = res.diag.recovery_candidates_accepted;
  d["j_lower_unclamped"] = res.diag.j_lower_unclamped;
  d["max_cert_violation"] = res.diag.max_cert_violation;
  d["min_cert_eigenvalue"] = res.diag.min_cert_eigenvalue;
  d["cc_denominator_residual"] = res.diag.cc_denominator_residual;
  d["warnings"] = res.diag.warnings;
  d["ms_lift"] = res.diag.ms_lift;
  d["ms_upper"] = res.diag.ms_upper;
  d["ms_bisection"] = res.diag.ms_bisection;
  d["ms_recovery"] = res.diag.ms_recovery;
  j["diagnostics"] = d;
  return j;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + out_path);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_trials) {
  cmd->add_option("--config", f.config_path,
                  "config file, JSON or key=value lines");
  cmd->add_option("--seed", f.seed, "override the base RNG seed");
  if (with_trials) {
    cmd->add_option("--trials", f.trials, "override the trial count per cell");
  }
  cmd->add_option("--out", f.out_path, "output path (default: stdout)");
}

RunConfig load_or_default(const CommonFlags& f) {
  RunConfig rc;
  if (!f.config_path.empty()) {
    rc = relaybf::harness::load_run_config(f.config_path);
  }
  if (f.seed) rc.base.seed = *f.seed;
  if (f.trials) rc.trials = *f.trials;
  if (!f.out_path.empty()) rc.output_path = f.out_path;
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max-min SINR relay beamforming via semidefinite relaxation"};
  app.require_subcommand(1);

  CommonFlags solve_f, sweep_f, bench_f, compare_f;
  std::uint64_t solve_trial = 0;
  std::optional<int> solve_n;
  std::optional<double> solve_rsi, solve_pt;
  std::string solve_mode;

  CLI::App* solve = app.add_subcommand(
      "solve", "solve one channel realization; prints the result as JSON");
  add_common(solve, solve_f, false);
  solve->add_option("--trial", solve_trial, "trial index for the channel draw");
  solve->add_option("--n", solve_n, "antennas per node (relay has 2n)");
  solve->add_option("--rsi-db", solve_rsi, "self-interference level, dB");
  solve->add_option("--pt-dbw", solve_pt, "total power, dBW");
  solve->add_option("--zfc-mode", solve_mode, "scalar | strict");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Monte Carlo sweep over the power grid; writes CSV + sidecar");
  add_common(sweep, sweep_f, true);
  std::optional<int> sweep_workers;
  bool sweep_oracle = false;
  std::optional<long> sweep_oracle_samples;
  sweep->add_option("--workers", sweep_workers, "threads per cell");
  sweep->add_flag("--oracle", sweep_oracle, "fold in the random-search oracle");
  sweep->add_option("--oracle-samples", sweep_oracle_samples,
                    "samples per oracle call");

  CLI::App* bench = app.add_subcommand(
      "bench", "wall-clock per solve stage at the first grid point");
  add_common(bench, bench_f, true);

  CLI::App* compare = app.add_subcommand(
      "compare", "join a sweep report against a baseline rate curve");
  add_common(compare, compare_f, false);
  std::string compare_report, compare_baseline;
  compare->add_option("--report", compare_report, "sweep report CSV")
      ->required();
  compare->add_option("--baseline", compare_baseline,
                      "baseline CSV (pt_dbw,mean_rate); defaults to the "
                      "config's baseline_path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (solve->parsed()) {
      RunConfig rc = load_or_default(solve_f);
      relaybf::channel::NetworkConfig cfg = rc.base;
      if (solve_n) cfg.n = *solve_n;
      if (solve_rsi) cfg.rsi_db = *solve_rsi;
      if (solve_pt) cfg.total_power = std::pow(10.0, *solve_pt / 10.0);
      if (!solve_mode.empty()) {
        if (solve_mode == "scalar") {
          cfg.zfc_mode = relaybf::channel::ZfcMode::scalar;
        } else if (solve_mode == "strict") {
          cfg.zfc_mode = relaybf::channel::ZfcMode::strict;
        } else {
          throw std::invalid_argument("--zfc-mode must be scalar or strict");
        }
      }
      const auto ch = relaybf::channel::sample_realization(cfg, solve_trial);
      const auto res = relaybf::maxmin::solve_maxmin(cfg, ch);
      emit(result_json(res).dump(2), solve_f.out_path);
      return res.diag.recovery_method == "recovery_degraded" ? kExitDegraded : 0;
    }
    if (sweep->parsed()) {
      RunConfig rc = load_or_default(sweep_f);
      if (sweep_workers) rc.workers = *sweep_workers;
      if (sweep_oracle) rc.oracle_enabled = true;
      if (sweep_oracle_samples) rc.oracle_samples = *sweep_oracle_samples;
      const auto report = relaybf::harness::run_sweep(rc);
      const std::string path =
          rc.output_path.empty() ? std::string("sweep_report.csv") : rc.output_path;
      relaybf::harness::write_report(report, path);
      std::cerr << "wrote " << path << " (" << report.cells.size()
                << " cells, hash " << report.config_hash << ")\n";
      return report.degraded ? kExitDegraded : 0;
    }
    if (bench->parsed()) {
      RunConfig rc = load_or_default(bench_f);
      if (!bench_f.trials) rc.trials = 5;  // benches default to a quick pass
      emit(relaybf::harness::format_bench(relaybf::harness::bench(rc)),
           bench_f.out_path);
      return 0;
    }
    if (compare->parsed()) {
      RunConfig rc = load_or_default(compare_f);
      std::string baseline_path = compare_baseline;
      if (baseline_path.empty() && rc.baseline_path) {
        baseline_path = *rc.baseline_path;
      }
      if (baseline_path.empty()) {
        throw std::invalid_argument(
            "compare needs --baseline or a config baseline_path");
      }
      const auto report = relaybf::harness::read_report(compare_report);
      const auto baseline = relaybf::harness::read_baseline(baseline_path);
      const auto cmp = relaybf::harness::merge_baseline(report, baseline);
      emit(relaybf::harness::format_comparison(cmp), compare_f.out_path);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegraded;
  }
  return 0;
}
