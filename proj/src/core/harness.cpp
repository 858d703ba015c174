#include "core/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "core/errors.hpp"
#include "core/flatfading.hpp"
#include "core/rng.hpp"
#include "core/spectra.hpp"

namespace ltir {

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidArgument("config: bad numeric value '" + v + "' for " + key);
  }
}

long to_int(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidArgument("config: bad integer value '" + v + "' for " + key);
  }
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InvalidArgument("config: bad boolean value '" + v + "' for " + key);
}
}  // namespace

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void apply_key_value(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  if (key == "seed") {
    spec.seed = static_cast<uint64_t>(to_int(value, key));
  } else if (key == "trials") {
    spec.trials = static_cast<int>(to_int(value, key));
  } else if (key == "var_sd") {
    spec.var_sd = to_double(value, key);
  } else if (key == "var_sr") {
    spec.var_sr = to_double(value, key);
  } else if (key == "var_rd") {
    spec.var_rd = to_double(value, key);
  } else if (key == "variances") {
    const auto parts = split(value, ',');
    if (parts.size() != 3) throw InvalidArgument("config: variances needs sd,sr,rd");
    spec.var_sd = to_double(parts[0], key);
    spec.var_sr = to_double(parts[1], key);
    spec.var_rd = to_double(parts[2], key);
  } else if (key == "sigma2") {
    spec.sigma2 = to_double(value, key);
  } else if (key == "channel_order") {
    spec.channel_order = static_cast<int>(to_int(value, key));
  } else if (key == "ls") {
    spec.ls = static_cast<int>(to_int(value, key));
  } else if (key == "lr") {
    spec.lr = static_cast<int>(to_int(value, key));
  } else if (key == "grid") {
    spec.grid_size = static_cast<int>(to_int(value, key));
  } else if (key == "max_iters") {
    spec.opt.max_iters = static_cast<int>(to_int(value, key));
  } else if (key == "tol") {
    spec.opt.rel_tol = to_double(value, key);
  } else if (key == "mu0") {
    spec.opt.mu0 = to_double(value, key);
  } else if (key == "sqrt_decay") {
    spec.opt.sqrt_decay = to_bool(value, key);
  } else if (key == "level_slack") {
    spec.opt.level_slack = to_double(value, key);
  } else if (key == "step_mode") {
    if (value == "normalized") spec.opt.step_mode = StepMode::normalized;
    else if (value == "polyak" || value == "polyak_level") spec.opt.step_mode = StepMode::polyak_level;
    else throw InvalidArgument("config: step_mode must be normalized|polyak_level");
  } else if (key == "algorithm") {
    if (value == "two_step") spec.opt.algorithm = Algorithm::two_step;
    else if (value == "xi" || value == "xi_reference") spec.opt.algorithm = Algorithm::xi_reference;
    else throw InvalidArgument("config: algorithm must be two_step|xi_reference");
  } else if (key == "init") {
    if (value == "full_power" || value == "full_power_relay") spec.opt.init = InitMode::full_power_relay;
    else if (value == "flat" || value == "flat_source") spec.opt.init = InitMode::flat_source;
    else if (value == "af" || value == "af_point") spec.opt.init = InitMode::af_point;
    else throw InvalidArgument("config: init must be full_power|flat|af");
  } else if (key == "causal_mode") {
    if (value == "causal") spec.causal_mode = CausalMode::causal;
    else if (value == "strict" || value == "strictly_causal") spec.causal_mode = CausalMode::strictly_causal;
    else if (value == "both") spec.causal_mode = CausalMode::both;
    else throw InvalidArgument("config: causal_mode must be causal|strict|both");
  } else if (key == "strictly_causal") {
    if (to_bool(value, key)) spec.causal_mode = CausalMode::strictly_causal;
  } else if (key == "sweep") {
    spec.sweep.clear();
    for (const auto& item : split(value, ',')) {
      const auto pair = split(item, ':');
      if (pair.size() == 1) {
        const double p = to_double(pair[0], key);
        spec.sweep.emplace_back(p, p);
      } else if (pair.size() == 2) {
        spec.sweep.emplace_back(to_double(pair[0], key), to_double(pair[1], key));
      } else {
        throw InvalidArgument("config: sweep entries are ps or ps:pr");
      }
    }
  } else if (key == "ps") {
    if (spec.sweep.empty()) spec.sweep.emplace_back(to_double(value, key), to_double(value, key));
    else spec.sweep[0].first = to_double(value, key);
  } else if (key == "pr") {
    if (spec.sweep.empty()) spec.sweep.emplace_back(to_double(value, key), to_double(value, key));
    else spec.sweep[0].second = to_double(value, key);
  } else if (key == "baselines") {
    spec.baseline_af = spec.baseline_one_tap = spec.baseline_lpf = false;
    for (const auto& b : split(value, ',')) {
      if (b == "af_flat" || b == "af") spec.baseline_af = true;
      else if (b == "one_tap") spec.baseline_one_tap = true;
      else if (b == "lpf") spec.baseline_lpf = true;
      else if (!b.empty()) throw InvalidArgument("config: unknown baseline '" + b + "'");
    }
  } else if (key == "deterministic") {
    spec.deterministic = to_bool(value, key);
  } else if (key == "workers") {
    spec.workers = static_cast<int>(to_int(value, key));
  } else {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

ExperimentSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open " + path);
  ExperimentSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config: line " + std::to_string(lineno) + " is not key = value");
    apply_key_value(spec, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return spec;
}

ChannelTriple generate_channels(uint64_t seed, uint64_t trial, int order, double var_sr,
                                double var_rd, double var_sd) {
  if (order < 1) throw InvalidArgument("generate_channels: order must be >= 1");
  if (var_sr < 0 || var_rd < 0 || var_sd < 0)
    throw InvalidArgument("generate_channels: variances must be >= 0");
  auto draw = [&](uint32_t channel_id, double var) {
    std::vector<double> taps(order);
    const double s = std::sqrt(var);
    for (int l = 0; l < order; ++l)
      taps[l] = s * counter_gaussian(seed, trial, channel_id, static_cast<uint32_t>(l));
    return FirFilter(std::move(taps));
  };
  return ChannelTriple(draw(0, var_sr), draw(1, var_rd), draw(2, var_sd));
}

ChannelTriple generate_channels(const ExperimentSpec& spec, uint64_t trial) {
  return generate_channels(spec.seed, trial, spec.channel_order, spec.var_sr, spec.var_rd,
                           spec.var_sd);
}

ChannelTriple load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("channel file: cannot open " + path);
  std::vector<FirFilter> filters;
  std::string line;
  while (std::getline(in, line) && filters.size() < 3) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> taps;
    double v;
    while (ss >> v) taps.push_back(v);
    if (taps.empty()) throw InvalidArgument("channel file: empty tap line");
    filters.emplace_back(std::move(taps));
  }
  if (filters.size() != 3)
    throw InvalidArgument("channel file: expected three tap lines (S-R, R-D, S-D)");
  return ChannelTriple(filters[0], filters[1], filters[2]);
}

void save_channel_file(const ChannelTriple& ch, const std::string& path) {
  std::ostringstream out;
  for (const FirFilter* f : {&ch.sr, &ch.rd, &ch.sd}) {
    for (int i = 0; i < f->order(); ++i) out << (i ? " " : "") << format_g9(f->taps[i]);
    out << "\n";
  }
  write_file(path, out.str());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open for writing: " + path);
  out << content;
}

namespace {
TrialRow run_trial(const ExperimentSpec& spec, const QuadratureGrid& grid, double ps, double pr,
                   int trial) {
  TrialRow row;
  row.ps = ps;
  row.pr = pr;
  row.trial = trial;
  row.rate_designed = row.rate_strict = row.rate_af = row.af_gain = kNaN;
  row.source_power = row.relay_power = kNaN;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ChannelTriple ch = generate_channels(spec, static_cast<uint64_t>(trial));
    const PowerBudget budget(ps, pr, spec.sigma2);
    if (spec.baseline_af) {
      const AfBaseline af = af_baseline(ch, budget, grid);
      row.rate_af = af.report.rate_bits;
      row.af_gain = af.gain;
    }
    if (spec.causal_mode != CausalMode::strictly_causal) {
      OptimizerConfig cfg = spec.opt;
      cfg.strictly_causal = false;
      const DesignOutcome out = design(ch, budget, spec.ls, spec.lr, cfg, grid);
      row.rate_designed = out.report.rate_bits;
      row.iters_designed = out.report.iterations;
      row.converged_designed = out.report.converged;
      row.source_power = out.report.source_power_used;
      row.relay_power = out.report.relay_power_used;
    }
    if (spec.causal_mode != CausalMode::causal) {
      OptimizerConfig cfg = spec.opt;
      cfg.strictly_causal = true;
      const DesignOutcome out = design(ch, budget, spec.ls, spec.lr, cfg, grid);
      row.rate_strict = out.report.rate_bits;
      row.iters_strict = out.report.iterations;
      row.converged_strict = out.report.converged;
      if (spec.causal_mode == CausalMode::strictly_causal) {
        row.source_power = out.report.source_power_used;
        row.relay_power = out.report.relay_power_used;
      }
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == ',' || c == '\n') c = ';';
    row.error = msg;
  }
  const auto t1 = std::chrono::steady_clock::now();
  row.wall_ms = spec.deterministic
                    ? 0.0
                    : std::chrono::duration<double, std::milli>(t1 - t0).count();
  return row;
}
}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw InvalidArgument("run_sweep: trials must be >= 1");
  if (spec.sweep.empty()) throw InvalidArgument("run_sweep: sweep must be nonempty");
  const QuadratureGrid grid(spec.grid_size);

  const int npts = static_cast<int>(spec.sweep.size());
  const int ntasks = npts * spec.trials;
  SweepResult result;
  result.details.resize(ntasks);

  int workers = spec.workers > 0 ? spec.workers
                                 : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, ntasks));

  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= ntasks) return;
      const int pt = idx / spec.trials;
      const int trial = idx % spec.trials;
      result.details[idx] =
          run_trial(spec, grid, spec.sweep[pt].first, spec.sweep[pt].second, trial);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Aggregate in trial-index order (results are order-independent anyway).
  for (int pt = 0; pt < npts; ++pt) {
    SweepRow srow;
    srow.ps = spec.sweep[pt].first;
    srow.pr = spec.sweep[pt].second;
    srow.trials = spec.trials;
    double sum_d = 0, sum_s = 0, sum_af = 0, sum_it = 0, sum_ms = 0;
    int n_ok = 0, n_runs = 0;
    for (int trial = 0; trial < spec.trials; ++trial) {
      const TrialRow& row = result.details[pt * spec.trials + trial];
      sum_ms += row.wall_ms;
      if (!row.error.empty()) {
        ++srow.errors;
        continue;
      }
      ++n_ok;
      if (std::isfinite(row.rate_designed)) {
        sum_d += row.rate_designed;
        sum_it += row.iters_designed;
        ++n_runs;
      }
      if (std::isfinite(row.rate_strict)) {
        sum_s += row.rate_strict;
        sum_it += row.iters_strict;
        ++n_runs;
      }
      if (std::isfinite(row.rate_af)) sum_af += row.rate_af;
    }
    const bool causal = spec.causal_mode != CausalMode::strictly_causal;
    const bool strict = spec.causal_mode != CausalMode::causal;
    srow.mean_rate_designed = (causal && n_ok) ? sum_d / n_ok : kNaN;
    srow.mean_rate_strict = (strict && n_ok) ? sum_s / n_ok : kNaN;
    srow.mean_rate_af = (spec.baseline_af && n_ok) ? sum_af / n_ok : kNaN;
    srow.mean_iterations = n_runs ? sum_it / n_runs : kNaN;
    srow.mean_wall_ms = sum_ms / spec.trials;

    srow.flat_af_rate = srow.flat_one_tap_rate = srow.flat_lpf_rate = kNaN;
    if ((spec.baseline_one_tap || spec.baseline_lpf) && spec.var_sd > 0) {
      const FlatChannel fc{std::sqrt(spec.var_sr / spec.var_sd),
                           std::sqrt(spec.var_rd / spec.var_sd)};
      const PowerBudget budget(srow.ps, srow.pr, spec.sigma2);
      srow.flat_af_rate = af_optimal(fc, budget).rate_bits;
      if (spec.baseline_one_tap)
        srow.flat_one_tap_rate = one_tap_delayed_rate(fc, budget, 1, grid);
      if (spec.baseline_lpf) srow.flat_lpf_rate = lpf_design_optimized(fc, budget).rate_bits;
    }
    result.summary.push_back(srow);
  }
  return result;
}

std::string summary_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "ps,pr,mean_rate_designed,mean_rate_af,mean_rate_strict,trials,mean_iterations,"
         "mean_wall_ms,errors,flat_af_rate,flat_one_tap_rate,flat_lpf_rate\n";
  for (const SweepRow& s : r.summary) {
    out << format_g9(s.ps) << ',' << format_g9(s.pr) << ',' << format_g9(s.mean_rate_designed)
        << ',' << format_g9(s.mean_rate_af) << ',' << format_g9(s.mean_rate_strict) << ','
        << s.trials << ',' << format_g9(s.mean_iterations) << ',' << format_g9(s.mean_wall_ms)
        << ',' << s.errors << ',' << format_g9(s.flat_af_rate) << ','
        << format_g9(s.flat_one_tap_rate) << ',' << format_g9(s.flat_lpf_rate) << '\n';
  }
  return out.str();
}

std::string detail_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "ps,pr,trial,rate_designed,iters_designed,converged_designed,rate_strict,"
         "iters_strict,converged_strict,rate_af,af_gain,source_power,relay_power,wall_ms,"
         "error\n";
  for (const TrialRow& t : r.details) {
    out << format_g9(t.ps) << ',' << format_g9(t.pr) << ',' << t.trial << ','
        << format_g9(t.rate_designed) << ',' << t.iters_designed << ','
        << (t.converged_designed ? 1 : 0) << ',' << format_g9(t.rate_strict) << ','
        << t.iters_strict << ',' << (t.converged_strict ? 1 : 0) << ',' << format_g9(t.rate_af)
        << ',' << format_g9(t.af_gain) << ',' << format_g9(t.source_power) << ','
        << format_g9(t.relay_power) << ',' << format_g9(t.wall_ms) << ',' << t.error << '\n';
  }
  return out.str();
}

TraceTable trace_instance(const ChannelTriple& ch, const PowerBudget& budget,
                          const ExperimentSpec& spec) {
  const QuadratureGrid grid(spec.grid_size);
  const AfBaseline af = af_baseline(ch, budget, grid);
  OptimizerConfig cfg = spec.opt;
  cfg.strictly_causal = spec.causal_mode == CausalMode::strictly_causal;
  const DesignOutcome out = design(ch, budget, spec.ls, spec.lr, cfg, grid);

  TraceTable t;
  t.designed_rate = out.report.rate_bits;
  t.af_rate = af.report.rate_bits;
  t.designed = out.point;
  const FirFilter af_h({af.gain});
  const int n = grid.size();
  t.omega.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double w = grid.nodes()[i];
    t.omega.push_back(w);
    t.af_noise.push_back(1.0 / cnr_density(ch, af_h, spec.sigma2, w));
    t.designed_noise.push_back(1.0 / cnr_density(ch, out.point.h, spec.sigma2, w));
    t.source_psd.push_back(std::norm(freq_response(out.point.t, w)));
    t.af_psd.push_back(budget.ps);
  }
  return t;
}

std::string trace_csv(const TraceTable& t) {
  std::ostringstream out;
  out << "# noise levels are 1/CNR; PSD normalization: (1/2pi) Int S dw = Ps, so the flat AF "
         "PSD column is the constant Ps\n";
  out << "omega,normalized_freq,af_noise_level,designed_noise_level,designed_source_psd,"
         "af_flat_psd\n";
  for (size_t i = 0; i < t.omega.size(); ++i) {
    out << format_g9(t.omega[i]) << ',' << format_g9(t.omega[i] / M_PI) << ','
        << format_g9(t.af_noise[i]) << ',' << format_g9(t.designed_noise[i]) << ','
        << format_g9(t.source_psd[i]) << ',' << format_g9(t.af_psd[i]) << '\n';
  }
  return out.str();
}

}  // namespace ltir
