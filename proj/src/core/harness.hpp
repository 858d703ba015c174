#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/fir.hpp"
#include "core/optimizer.hpp"

namespace ltir {

enum class CausalMode { causal, strictly_causal, both };

struct ExperimentSpec {
  uint64_t seed = 1;
  int trials = 100;
  // Per-channel tap variances, spec order (S-D, S-R, R-D).
  double var_sd = 1.0, var_sr = 1.0, var_rd = 1.0;
  int channel_order = 5;
  std::vector<std::pair<double, double>> sweep;  // (Ps, Pr) points
  int ls = 30, lr = 20;
  CausalMode causal_mode = CausalMode::both;
  OptimizerConfig opt;
  int grid_size = 512;
  double sigma2 = 1.0;
  bool baseline_af = true;        // ISI AF reference (always used by the sweep)
  bool baseline_one_tap = false;  // flat-fading-equivalent diagnostics
  bool baseline_lpf = false;
  bool deterministic = false;  // zero wall-time columns for byte-stable CSVs
  int workers = 0;             // 0 = hardware concurrency
};

// key=value application shared by the config file and the CLI flags.
void apply_key_value(ExperimentSpec& spec, const std::string& key, const std::string& value);
ExperimentSpec parse_config_file(const std::string& path);

// Channel taps ~ N(0, var), keyed by (seed, trial, channel id, tap index).
ChannelTriple generate_channels(uint64_t seed, uint64_t trial, int order, double var_sr,
                                double var_rd, double var_sd);
ChannelTriple generate_channels(const ExperimentSpec& spec, uint64_t trial);

// Three lines of space-separated taps: S-R, R-D, S-D.
ChannelTriple load_channel_file(const std::string& path);
void save_channel_file(const ChannelTriple& ch, const std::string& path);

struct TrialRow {
  double ps = 0, pr = 0;
  int trial = 0;
  double rate_designed = 0, rate_strict = 0, rate_af = 0, af_gain = 0;
  int iters_designed = 0, iters_strict = 0;
  bool converged_designed = false, converged_strict = false;
  double source_power = 0, relay_power = 0;
  double wall_ms = 0;
  std::string error;  // empty on success
};

struct SweepRow {
  double ps = 0, pr = 0;
  double mean_rate_designed = 0, mean_rate_af = 0, mean_rate_strict = 0;
  int trials = 0;
  double mean_iterations = 0;
  double mean_wall_ms = 0;
  int errors = 0;
  double flat_af_rate = 0, flat_one_tap_rate = 0, flat_lpf_rate = 0;
};

struct SweepResult {
  std::vector<SweepRow> summary;
  std::vector<TrialRow> details;
};

SweepResult run_sweep(const ExperimentSpec& spec);

std::string summary_csv(const SweepResult& r);
std::string detail_csv(const SweepResult& r);
void write_file(const std::string& path, const std::string& content);

// The four curves of the per-frequency diagnostic table, one value per grid
// node: AF noise level (1/CNR at the AF gain), designed noise level, designed
// source PSD |T|^2 and the flat AF PSD (constant Ps).
struct TraceTable {
  std::vector<double> omega, af_noise, designed_noise, source_psd, af_psd;
  double designed_rate = 0, af_rate = 0;
  DesignPoint designed;
};

TraceTable trace_instance(const ChannelTriple& ch, const PowerBudget& budget,
                          const ExperimentSpec& spec);
std::string trace_csv(const TraceTable& t);

// Fixed-format numeric printing (9 significant digits) for CSV stability.
std::string format_g9(double v);

}  // namespace ltir
