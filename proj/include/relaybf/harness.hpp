#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relaybf/channel.hpp"
#include "relaybf/maxmin.hpp"

namespace relaybf::harness {

inline constexpr const char* kVersion = "1.0.0";
// Exact CSV header; reports are byte-identical across runs of the same config.
inline constexpr const char* kCsvHeader =
    "n,rsi_db,pt_dbw,mean_rate_upper,mean_rate_lower,mean_gap,trials,failures";

struct RunConfig {
  channel::NetworkConfig base;
  std::vector<double> pt_grid_dbw = {0, 5, 10, 15, 20, 25, 30};
  int trials = 1000;
  std::vector<double> rsi_levels_db = {-10, -40};
  std::vector<int> n_values = {2, 3};
  bool oracle_enabled = false;
  long oracle_samples = 10000;
  int workers = 1;  // trials per cell run concurrently up to this many threads
  std::string output_path;
  std::optional<std::string> baseline_path;
};

std::vector<std::string> validate_run_config(const RunConfig& rc);

struct CellStats {
  int n = 0;
  double rsi_db = 0.0, pt_dbw = 0.0;
  int trials = 0;
  int failures = 0;
  int degraded_recoveries = 0;
  double mean_rate_upper = 0.0;  // log2(1 + j_max), mean over successful trials
  double mean_rate_lower = 0.0;  // log2(1 + j_lower)
  double mean_gap = 0.0;         // mean(rate_upper - rate_lower) >= 0
  // Sample standard deviations of the per-trial rates (sidecar only; the CSV
  // column set is fixed). Zero when fewer than two trials succeed.
  double std_rate_upper = 0.0;
  double std_rate_lower = 0.0;
  double mean_bisection_iters = 0.0;
  double wall_ms = 0.0;
  double mean_oracle_rate = 0.0;  // only when the oracle is enabled
  bool oracle_present = false;
};

struct SweepReport {
  std::string version = kVersion;
  std::uint64_t seed = 0;
  std::string config_hash;  // FNV-1a of the canonical config JSON
  RunConfig config;
  std::vector<CellStats> cells;
  bool degraded = false;  // some cell exceeded 10% trial failures
};

// Runs trials x (n x rsi x P_T grid) solve_maxmin calls with per-trial seeds
// derived from (base.seed, trial_index). The base channel draws are shared
// across RSI levels and power points (paired trials). Powers follow the
// quarter/quarter/half split of total power unless explicitly set in base.
// Failed trials are counted, never averaged in. Trials within a cell run on
// up to `workers` threads; results are keyed by trial index, so aggregation
// (and the CSV) is byte-identical for any worker count.
SweepReport run_sweep(const RunConfig& rc);

// CSV at path plus a JSON sidecar at path + ".json" (config echo, seed,
// version, config hash, per-cell failure and degraded-recovery counts).
void write_report(const SweepReport& sr, const std::string& path);

// Parses the CSV (and the sidecar when present). Malformed rows raise
// std::runtime_error naming the line number.
SweepReport read_report(const std::string& path);

struct BaselinePoint {
  double pt_dbw = 0.0;
  double mean_rate = 0.0;
};

// Baseline CSV format: header `pt_dbw,mean_rate`, one point per row.
std::vector<BaselinePoint> read_baseline(const std::string& path);

struct ComparisonRow {
  int n = 0;
  double rsi_db = 0.0, pt_dbw = 0.0;
  double rate_lower = 0.0;
  std::optional<double> baseline;
  std::optional<double> delta;  // rate_lower - baseline
  bool matched = false;
};

struct Comparison {
  std::vector<ComparisonRow> rows;           // one per report cell
  std::vector<BaselinePoint> baseline_only;  // baseline points absent from the report grid
};

// Joins on the P_T grid (each (n, rsi) slice against the same baseline
// curve); unmatched points are flagged, never interpolated. Throws when the
// two P_T grids are disjoint, listing both.
Comparison merge_baseline(const SweepReport& sr,
                          const std::vector<BaselinePoint>& baseline);

std::string format_comparison(const Comparison& cmp);

struct BenchRow {
  int n = 0;
  std::string stage;  // lift | upper_bound | bisection | recovery
  double mean_ms = 0.0, min_ms = 0.0, max_ms = 0.0;
  int count = 0;
};

// Wall-clock per solve stage, rc.trials solves per n at the first grid point.
std::vector<BenchRow> bench(const RunConfig& rc);

std::string format_bench(const std::vector<BenchRow>& rows);

// Config file loading: a JSON object or flat key=value lines, both using the
// same flat key set. Unknown keys raise std::invalid_argument.
RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json_text(const std::string& text);
RunConfig run_config_from_kv_text(const std::string& text);

std::string config_to_json(const RunConfig& rc);  // canonical echo used for hashing
std::string fnv1a_hex(const std::string& data);

}  // namespace relaybf::harness
