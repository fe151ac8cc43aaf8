#include "relaybf/channel.hpp"

#include <cmath>

#include "relaybf/rng.hpp"

namespace relaybf::channel {

namespace {

// Stream identifiers; part of the determinism contract.
enum StreamId : std::uint64_t {
  kF1r = 1,
  kF2r = 2,
  kFr1 = 3,
  kFr2 = 4,
  kHrr = 5,
  kF11 = 6,
  kF22 = 7,
};

ComplexVector draw_vector(rng::Stream& s, int n) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = s.cnormal();
  return v;
}

ComplexMatrix draw_matrix(rng::Stream& s, int rows, int cols) {
  // Column-major fill to match vec()/unvec() conventions.
  ComplexMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = s.cnormal();
  }
  return m;
}

}  // namespace

double NetworkConfig::source_power(int user) const {
  const std::optional<double>& p = (user == 1) ? p1 : p2;
  return p.value_or(total_power / 4.0);
}

double NetworkConfig::relay_budget() const {
  return p_relay.value_or(total_power / 2.0);
}

double NetworkConfig::rsi_variance() const {
  return std::pow(10.0, rsi_db / 10.0);
}

std::vector<std::string> validate_config(const NetworkConfig& cfg) {
  std::vector<std::string> v;
  if (cfg.n < 2) {
    v.push_back("n must be at least 2 (got " + std::to_string(cfg.n) + ")");
  }
  if (!(cfg.total_power > 0.0)) {
    v.push_back("total_power must be positive");
  }
  if (!(cfg.source_power(1) > 0.0) || !(cfg.source_power(2) > 0.0)) {
    v.push_back("source powers must be positive");
  }
  if (!(cfg.relay_budget() > 0.0)) {
    v.push_back("relay power must be positive");
  }
  if (cfg.total_power > 0.0) {
    const double used = cfg.source_power(1) + cfg.source_power(2) + cfg.relay_budget();
    if (used > cfg.total_power * (1.0 + 1e-9)) {
      v.push_back("power split exceeds total power budget (p1 + p2 + p_relay > total_power)");
    }
  }
  if (!(cfg.sigma2 > 0.0)) {
    v.push_back("sigma2 must be positive");
  }
  if (cfg.zfc_mode == ZfcMode::strict &&
      (cfg.rsi_rank < 1 || cfg.rsi_rank >= cfg.n)) {
    v.push_back("rsi_rank must be in [1, n-1] in strict mode");
  }
  if (!(cfg.bisection_tol > 0.0)) {
    v.push_back("bisection_tol must be positive");
  }
  if (!(cfg.feas_tol > 0.0)) {
    v.push_back("feas_tol must be positive");
  }
  return v;
}

bool is_valid(const NetworkConfig& cfg) { return validate_config(cfg).empty(); }

ChannelRealization sample_realization(const NetworkConfig& cfg, std::uint64_t trial_index) {
  const int n = cfg.n;
  const double rsi_amp = std::sqrt(cfg.rsi_variance());
  ChannelRealization ch;
  ch.trial_index = trial_index;
  {
    rng::Stream s(cfg.seed, trial_index, kF1r);
    ch.f_1r = draw_vector(s, n);
  }
  {
    rng::Stream s(cfg.seed, trial_index, kF2r);
    ch.f_2r = draw_vector(s, n);
  }
  {
    rng::Stream s(cfg.seed, trial_index, kFr1);
    ch.f_r1 = draw_vector(s, n);
  }
  {
    rng::Stream s(cfg.seed, trial_index, kFr2);
    ch.f_r2 = draw_vector(s, n);
  }
  {
    rng::Stream s(cfg.seed, trial_index, kHrr);
    if (cfg.zfc_mode == ZfcMode::strict) {
      const int r = cfg.rsi_rank;
      const ComplexMatrix a = draw_matrix(s, n, r);
      const ComplexMatrix b = draw_matrix(s, n, r);
      ch.h_rr = (rsi_amp / std::sqrt(static_cast<double>(r))) * a * b.adjoint();
    } else {
      ch.h_rr = rsi_amp * draw_matrix(s, n, n);
    }
  }
  {
    rng::Stream s(cfg.seed, trial_index, kF11);
    ch.f_11 = rsi_amp * s.cnormal();
  }
  {
    rng::Stream s(cfg.seed, trial_index, kF22);
    ch.f_22 = rsi_amp * s.cnormal();
  }
  return ch;
}

}  // namespace relaybf::channel
