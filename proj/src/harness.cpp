#include "relaybf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "relaybf/lift.hpp"
#include "relaybf/oracle.hpp"
#include "relaybf/rng.hpp"

namespace relaybf::harness {

namespace {

using channel::NetworkConfig;
using channel::ZfcMode;
using nlohmann::json;

constexpr std::uint64_t kOracleSalt = 0x6F7261636CULL;

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
      .count();
}

std::string fmt_g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string mode_name(ZfcMode m) {
  return m == ZfcMode::strict ? "strict" : "scalar";
}

ZfcMode mode_from_name(const std::string& s) {
  if (s == "scalar") return ZfcMode::scalar;
  if (s == "strict") return ZfcMode::strict;
  throw std::invalid_argument("zfc_mode must be 'scalar' or 'strict', got '" + s + "'");
}

json config_json(const RunConfig& rc) {
  json j;
  j["n"] = rc.base.n;
  j["total_power"] = rc.base.total_power;
  j["p1"] = rc.base.p1 ? json(*rc.base.p1) : json(nullptr);
  j["p2"] = rc.base.p2 ? json(*rc.base.p2) : json(nullptr);
  j["p_relay"] = rc.base.p_relay ? json(*rc.base.p_relay) : json(nullptr);
  j["sigma2"] = rc.base.sigma2;
  j["rsi_db"] = rc.base.rsi_db;
  j["zfc_mode"] = mode_name(rc.base.zfc_mode);
  j["rsi_rank"] = rc.base.rsi_rank;
  j["bisection_tol"] = rc.base.bisection_tol;
  j["feas_tol"] = rc.base.feas_tol;
  j["seed"] = rc.base.seed;
  j["pt_grid_dbw"] = rc.pt_grid_dbw;
  j["trials"] = rc.trials;
  j["rsi_levels_db"] = rc.rsi_levels_db;
  j["n_values"] = rc.n_values;
  j["oracle_enabled"] = rc.oracle_enabled;
  j["oracle_samples"] = rc.oracle_samples;
  j["workers"] = rc.workers;
  j["output_path"] = rc.output_path;
  j["baseline_path"] = rc.baseline_path ? json(*rc.baseline_path) : json(nullptr);
  return j;
}

RunConfig config_from_json(const json& j) {
  static const std::set<std::string> known = {
      "n", "total_power", "p1", "p2", "p_relay", "sigma2", "rsi_db",
      "zfc_mode", "rsi_rank", "bisection_tol", "feas_tol", "seed",
      "pt_grid_dbw", "trials", "rsi_levels_db", "n_values",
      "oracle_enabled", "oracle_samples", "workers", "output_path",
      "baseline_path"};
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw std::invalid_argument("config: unknown key '" + item.key() + "'");
    }
  }
  RunConfig rc;
  rc.base.n = j.value("n", rc.base.n);
  rc.base.total_power = j.value("total_power", rc.base.total_power);
  if (j.contains("p1") && !j["p1"].is_null()) rc.base.p1 = j["p1"].get<double>();
  if (j.contains("p2") && !j["p2"].is_null()) rc.base.p2 = j["p2"].get<double>();
  if (j.contains("p_relay") && !j["p_relay"].is_null()) {
    rc.base.p_relay = j["p_relay"].get<double>();
  }
  rc.base.sigma2 = j.value("sigma2", rc.base.sigma2);
  rc.base.rsi_db = j.value("rsi_db", rc.base.rsi_db);
  if (j.contains("zfc_mode")) {
    rc.base.zfc_mode = mode_from_name(j["zfc_mode"].get<std::string>());
  }
  rc.base.rsi_rank = j.value("rsi_rank", rc.base.rsi_rank);
  rc.base.bisection_tol = j.value("bisection_tol", rc.base.bisection_tol);
  rc.base.feas_tol = j.value("feas_tol", rc.base.feas_tol);
  rc.base.seed = j.value("seed", rc.base.seed);
  if (j.contains("pt_grid_dbw")) rc.pt_grid_dbw = j["pt_grid_dbw"].get<std::vector<double>>();
  rc.trials = j.value("trials", rc.trials);
  if (j.contains("rsi_levels_db")) {
    rc.rsi_levels_db = j["rsi_levels_db"].get<std::vector<double>>();
  }
  if (j.contains("n_values")) rc.n_values = j["n_values"].get<std::vector<int>>();
  rc.oracle_enabled = j.value("oracle_enabled", rc.oracle_enabled);
  rc.oracle_samples = j.value("oracle_samples", rc.oracle_samples);
  rc.workers = j.value("workers", rc.workers);
  rc.output_path = j.value("output_path", rc.output_path);
  if (j.contains("baseline_path") && !j["baseline_path"].is_null()) {
    rc.baseline_path = j["baseline_path"].get<std::string>();
  }
  return rc;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != trim(s).size() && pos != s.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number for " + what + ": '" + s + "'");
  }
}

long parse_long(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != trim(s).size() && pos != s.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse integer for " + what + ": '" + s + "'");
  }
}

bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("cannot parse boolean for " + what + ": '" + s + "'");
}

}  // namespace

std::string config_to_json(const RunConfig& rc) { return config_json(rc).dump(); }

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig run_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config JSON parse error: ") + e.what());
  }
  return config_from_json(j);
}

RunConfig run_config_from_kv_text(const std::string& text) {
  json j = json::object();
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    bool known = true;
    try {
    if (key == "n" || key == "rsi_rank" || key == "trials" || key == "workers") {
      j[key] = parse_long(val, key);
    } else if (key == "seed" || key == "oracle_samples") {
      j[key] = static_cast<std::uint64_t>(parse_long(val, key));
    } else if (key == "total_power" || key == "p1" || key == "p2" ||
               key == "p_relay" || key == "sigma2" || key == "rsi_db" ||
               key == "bisection_tol" || key == "feas_tol") {
      j[key] = parse_double(val, key);
    } else if (key == "zfc_mode" || key == "output_path" || key == "baseline_path") {
      j[key] = val;
    } else if (key == "oracle_enabled") {
      j[key] = parse_bool(val, key);
    } else if (key == "pt_grid_dbw" || key == "rsi_levels_db") {
      std::vector<double> v;
      for (const std::string& tok : split(val, ',')) {
        v.push_back(parse_double(trim(tok), key));
      }
      j[key] = v;
    } else if (key == "n_values") {
      std::vector<int> v;
      for (const std::string& tok : split(val, ',')) {
        v.push_back(static_cast<int>(parse_long(trim(tok), key)));
      }
      j[key] = v;
    } else {
      known = false;
    }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": " + e.what());
    }
    if (!known) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    }
  }
  return config_from_json(j);
}

RunConfig load_run_config(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return run_config_from_json_text(text);
  }
  return run_config_from_kv_text(text);
}

std::vector<std::string> validate_run_config(const RunConfig& rc) {
  std::vector<std::string> v;
  if (rc.trials < 1) v.push_back("trials must be >= 1");
  if (rc.pt_grid_dbw.empty()) v.push_back("pt_grid_dbw must be nonempty");
  if (rc.rsi_levels_db.empty()) v.push_back("rsi_levels_db must be nonempty");
  if (rc.n_values.empty()) v.push_back("n_values must be nonempty");
  if (rc.oracle_enabled && rc.oracle_samples < 1) {
    v.push_back("oracle_samples must be >= 1");
  }
  if (rc.workers < 1) v.push_back("workers must be >= 1");
  std::set<std::string> seen;
  for (const int n : rc.n_values) {
    for (const double rsi : rc.rsi_levels_db) {
      for (const double pt : rc.pt_grid_dbw) {
        NetworkConfig cfg = rc.base;
        cfg.n = n;
        cfg.rsi_db = rsi;
        cfg.total_power = std::pow(10.0, pt / 10.0);
        for (const std::string& msg : channel::validate_config(cfg)) {
          if (seen.insert(msg).second) v.push_back(msg);
        }
      }
    }
  }
  return v;
}

SweepReport run_sweep(const RunConfig& rc) {
  const std::vector<std::string> violations = validate_run_config(rc);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "invalid run config:";
    for (const std::string& v : violations) os << " [" << v << "]";
    throw std::invalid_argument(os.str());
  }
  SweepReport sr;
  sr.seed = rc.base.seed;
  sr.config = rc;
  sr.config_hash = fnv1a_hex(config_to_json(rc));
  for (const int n : rc.n_values) {
    for (const double rsi : rc.rsi_levels_db) {
      for (const double pt : rc.pt_grid_dbw) {
        NetworkConfig cfg = rc.base;
        cfg.n = n;
        cfg.rsi_db = rsi;
        cfg.total_power = std::pow(10.0, pt / 10.0);
        CellStats cell;
        cell.n = n;
        cell.rsi_db = rsi;
        cell.pt_dbw = pt;
        cell.trials = rc.trials;
        struct TrialOutcome {
          bool ok = false;
          bool degraded = false;
          double up = 0, low = 0, gap = 0, iters = 0, oracle = 0;
        };
        std::vector<TrialOutcome> outcomes(rc.trials);
        std::atomic<int> next{0};
        const auto work = [&]() {
          for (;;) {
            const int t = next.fetch_add(1);
            if (t >= rc.trials) return;
            TrialOutcome& o = outcomes[t];
            try {
              const channel::ChannelRealization ch =
                  channel::sample_realization(cfg, static_cast<std::uint64_t>(t));
              const maxmin::MaxMinResult res = maxmin::solve_maxmin(cfg, ch);
              o.up = std::log2(1.0 + res.j_max);
              o.low = res.rate_lower_bits;
              o.gap = o.up - o.low;
              o.iters = res.diag.bisection_iterations;
              o.degraded = res.diag.recovery_method == "recovery_degraded";
              if (rc.oracle_enabled) {
                const lift::LiftedProblem lp = lift::build_lifted(cfg, ch);
                const oracle::OracleResult obf = oracle::brute_force(
                    lp, rc.oracle_samples,
                    rng::mix(cfg.seed, static_cast<std::uint64_t>(t), kOracleSalt),
                    cfg.zfc_mode);
                o.oracle = std::log2(1.0 + obf.j_bf);
              }
              o.ok = true;
            } catch (const std::exception&) {
              o.ok = false;
            }
          }
        };
        const double t_start = now_ms();
        const int nw = std::min(rc.workers, rc.trials);
        if (nw <= 1) {
          work();
        } else {
          std::vector<std::thread> pool;
          pool.reserve(nw);
          for (int i = 0; i < nw; ++i) pool.emplace_back(work);
          for (std::thread& th : pool) th.join();
        }
        cell.wall_ms = now_ms() - t_start;
        double sum_up = 0.0, sum_low = 0.0, sum_gap = 0.0, sum_iter = 0.0;
        double sum_oracle = 0.0, sq_up = 0.0, sq_low = 0.0;
        for (const TrialOutcome& o : outcomes) {
          if (!o.ok) {
            ++cell.failures;
            continue;
          }
          sum_up += o.up;
          sum_low += o.low;
          sq_up += o.up * o.up;
          sq_low += o.low * o.low;
          sum_gap += o.gap;
          sum_iter += o.iters;
          sum_oracle += o.oracle;
          if (o.degraded) ++cell.degraded_recoveries;
        }
        const int ok = rc.trials - cell.failures;
        if (ok > 0) {
          cell.mean_rate_upper = sum_up / ok;
          cell.mean_rate_lower = sum_low / ok;
          cell.mean_gap = sum_gap / ok;
          cell.mean_bisection_iters = sum_iter / ok;
          if (ok > 1) {
            const double vu =
                (sq_up - sum_up * sum_up / ok) / (ok - 1);
            const double vl =
                (sq_low - sum_low * sum_low / ok) / (ok - 1);
            cell.std_rate_upper = std::sqrt(std::max(0.0, vu));
            cell.std_rate_lower = std::sqrt(std::max(0.0, vl));
          }
          if (rc.oracle_enabled) {
            cell.mean_oracle_rate = sum_oracle / ok;
            cell.oracle_present = true;
          }
        }
        if (cell.failures * 10 > rc.trials) sr.degraded = true;
        sr.cells.push_back(cell);
      }
    }
  }
  return sr;
}

void write_report(const SweepReport& sr, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << kCsvHeader << "\n";
  for (const CellStats& c : sr.cells) {
    out << c.n << ',' << fmt_g17(c.rsi_db) << ',' << fmt_g17(c.pt_dbw) << ','
        << fmt_g17(c.mean_rate_upper) << ',' << fmt_g17(c.mean_rate_lower)
        << ',' << fmt_g17(c.mean_gap) << ',' << c.trials << ',' << c.failures
        << "\n";
  }
  out.close();
  if (!out) throw std::runtime_error("error writing report: " + path);

  json side;
  side["version"] = sr.version;
  side["seed"] = sr.seed;
  side["config_hash"] = sr.config_hash;
  side["config"] = config_json(sr.config);
  side["degraded"] = sr.degraded;
  json cells = json::array();
  for (const CellStats& c : sr.cells) {
    json jc;
    jc["n"] = c.n;
    jc["rsi_db"] = c.rsi_db;
    jc["pt_dbw"] = c.pt_dbw;
    jc["trials"] = c.trials;
    jc["failures"] = c.failures;
    jc["degraded_recoveries"] = c.degraded_recoveries;
    jc["mean_rate_upper"] = c.mean_rate_upper;
    jc["mean_rate_lower"] = c.mean_rate_lower;
    jc["mean_gap"] = c.mean_gap;
    jc["std_rate_upper"] = c.std_rate_upper;
    jc["std_rate_lower"] = c.std_rate_lower;
    jc["mean_bisection_iters"] = c.mean_bisection_iters;
    jc["wall_ms"] = c.wall_ms;
    if (c.oracle_present) jc["mean_oracle_rate"] = c.mean_oracle_rate;
    cells.push_back(jc);
  }
  side["cells"] = cells;
  std::ofstream sout(path + ".json", std::ios::binary);
  if (!sout) throw std::runtime_error("cannot write sidecar: " + path + ".json");
  sout << side.dump(2) << "\n";
}

SweepReport read_report(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  SweepReport sr;
  if (!std::getline(is, line)) {
    throw std::runtime_error(path + ": line 1: empty report");
  }
  ++lineno;
  if (trim(line) != kCsvHeader) {
    throw std::runtime_error(path + ": line 1: bad header, expected '" +
                             std::string(kCsvHeader) + "'");
  }
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(trim(line), ',');
    if (f.size() != 8) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": expected 8 fields, got " +
                               std::to_string(f.size()));
    }
    CellStats c;
    try {
      c.n = static_cast<int>(parse_long(f[0], "n"));
      c.rsi_db = parse_double(f[1], "rsi_db");
      c.pt_dbw = parse_double(f[2], "pt_dbw");
      c.mean_rate_upper = parse_double(f[3], "mean_rate_upper");
      c.mean_rate_lower = parse_double(f[4], "mean_rate_lower");
      c.mean_gap = parse_double(f[5], "mean_gap");
      c.trials = static_cast<int>(parse_long(f[6], "trials"));
      c.failures = static_cast<int>(parse_long(f[7], "failures"));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": " +
                               e.what());
    }
    sr.cells.push_back(c);
  }
  const std::string side_path = path + ".json";
  if (std::filesystem::exists(side_path)) {
    json side = json::parse(read_text_file(side_path));
    sr.version = side.value("version", sr.version);
    sr.seed = side.value("seed", sr.seed);
    sr.config_hash = side.value("config_hash", sr.config_hash);
    sr.degraded = side.value("degraded", sr.degraded);
    if (side.contains("config")) sr.config = config_from_json(side["config"]);
    if (side.contains("cells") && side["cells"].size() == sr.cells.size()) {
      for (size_t i = 0; i < sr.cells.size(); ++i) {
        const json& jc = side["cells"][i];
        sr.cells[i].degraded_recoveries = jc.value("degraded_recoveries", 0);
        sr.cells[i].std_rate_upper = jc.value("std_rate_upper", 0.0);
        sr.cells[i].std_rate_lower = jc.value("std_rate_lower", 0.0);
        sr.cells[i].mean_bisection_iters = jc.value("mean_bisection_iters", 0.0);
        sr.cells[i].wall_ms = jc.value("wall_ms", 0.0);
        if (jc.contains("mean_oracle_rate")) {
          sr.cells[i].mean_oracle_rate = jc["mean_oracle_rate"].get<double>();
          sr.cells[i].oracle_present = true;
        }
      }
    }
  }
  return sr;
}

std::vector<BaselinePoint> read_baseline(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::vector<BaselinePoint> pts;
  if (!std::getline(is, line)) {
    throw std::runtime_error(path + ": line 1: empty baseline");
  }
  ++lineno;
  std::string header = trim(line);
  header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
  if (header != "pt_dbw,mean_rate") {
    throw std::runtime_error(path + ": line 1: bad header, expected 'pt_dbw,mean_rate'");
  }
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(trim(line), ',');
    if (f.size() != 2) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": expected 2 fields");
    }
    try {
      pts.push_back({parse_double(f[0], "pt_dbw"), parse_double(f[1], "mean_rate")});
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return pts;
}

Comparison merge_baseline(const SweepReport& sr,
                          const std::vector<BaselinePoint>& baseline) {
  Comparison cmp;
  std::set<double> report_pts, matched_pts;
  for (const CellStats& c : sr.cells) report_pts.insert(c.pt_dbw);
  for (const CellStats& c : sr.cells) {
    ComparisonRow row;
    row.n = c.n;
    row.rsi_db = c.rsi_db;
    row.pt_dbw = c.pt_dbw;
    row.rate_lower = c.mean_rate_lower;
    for (const BaselinePoint& b : baseline) {
      if (std::abs(b.pt_dbw - c.pt_dbw) <= 1e-9) {
        row.baseline = b.mean_rate;
        row.delta = c.mean_rate_lower - b.mean_rate;
        row.matched = true;
        matched_pts.insert(c.pt_dbw);
        break;
      }
    }
    cmp.rows.push_back(row);
  }
  for (const BaselinePoint& b : baseline) {
    bool found = false;
    for (const double pt : report_pts) {
      if (std::abs(b.pt_dbw - pt) <= 1e-9) {
        found = true;
        break;
      }
    }
    if (!found) cmp.baseline_only.push_back(b);
  }
  if (matched_pts.empty() && !sr.cells.empty() && !baseline.empty()) {
    std::ostringstream os;
    os << "disjoint power grids: report {";
    for (const double pt : report_pts) os << ' ' << pt;
    os << " } vs baseline {";
    for (const BaselinePoint& b : baseline) os << ' ' << b.pt_dbw;
    os << " }";
    throw std::runtime_error(os.str());
  }
  return cmp;
}

std::string format_comparison(const Comparison& cmp) {
  std::ostringstream os;
  os << "n,rsi_db,pt_dbw,rate_lower,baseline,delta,status\n";
  for (const ComparisonRow& r : cmp.rows) {
    os << r.n << ',' << fmt_g17(r.rsi_db) << ',' << fmt_g17(r.pt_dbw) << ','
       << fmt_g17(r.rate_lower) << ',';
    if (r.matched) {
      os << fmt_g17(*r.baseline) << ',' << fmt_g17(*r.delta) << ",matched\n";
    } else {
      os << ",,unmatched\n";
    }
  }
  for (const BaselinePoint& b : cmp.baseline_only) {
    os << ",," << fmt_g17(b.pt_dbw) << ",," << fmt_g17(b.mean_rate)
       << ",,baseline_only\n";
  }
  return os.str();
}

std::vector<BenchRow> bench(const RunConfig& rc) {
  const std::vector<std::string> violations = validate_run_config(rc);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "invalid run config:";
    for (const std::string& v : violations) os << " [" << v << "]";
    throw std::invalid_argument(os.str());
  }
  std::vector<BenchRow> rows;
  const char* stage_names[4] = {"lift", "upper_bound", "bisection", "recovery"};
  for (const int n : rc.n_values) {
    NetworkConfig cfg = rc.base;
    cfg.n = n;
    cfg.rsi_db = rc.rsi_levels_db.front();
    cfg.total_power = std::pow(10.0, rc.pt_grid_dbw.front() / 10.0);
    double sum[4] = {0, 0, 0, 0}, mn[4], mx[4];
    std::fill(mn, mn + 4, std::numeric_limits<double>::infinity());
    std::fill(mx, mx + 4, 0.0);
    int count = 0;
    for (int t = 0; t < rc.trials; ++t) {
      try {
        const channel::ChannelRealization ch =
            channel::sample_realization(cfg, static_cast<std::uint64_t>(t));
        const maxmin::MaxMinResult res = maxmin::solve_maxmin(cfg, ch);
        const double stages[4] = {res.diag.ms_lift, res.diag.ms_upper,
                                  res.diag.ms_bisection, res.diag.ms_recovery};
        for (int s = 0; s < 4; ++s) {
          sum[s] += stages[s];
          mn[s] = std::min(mn[s], stages[s]);
          mx[s] = std::max(mx[s], stages[s]);
        }
        ++count;
      } catch (const std::exception&) {
        // benched stages come from successful solves only
      }
    }
    for (int s = 0; s < 4; ++s) {
      BenchRow row;
      row.n = n;
      row.stage = stage_names[s];
      row.count = count;
      if (count > 0) {
        row.mean_ms = sum[s] / count;
        row.min_ms = mn[s];
        row.max_ms = mx[s];
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_bench(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "n,stage,mean_ms,min_ms,max_ms,count\n";
  for (const BenchRow& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%s,%.3f,%.3f,%.3f,%d\n", r.n,
                  r.stage.c_str(), r.mean_ms, r.min_ms, r.max_ms, r.count);
    os << buf;
  }
  return os.str();
}

}  // namespace relaybf::harness
