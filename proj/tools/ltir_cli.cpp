// Command-line driver for the ltirelay shared library. Links the C API only.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltirelay.h"

namespace {

struct ExpArgs {
  std::vector<std::pair<std::string, std::string>> kv;  // applied in order
  std::string config_path;
};

// Mirrors the config-file keys so CLI flags and files share one code path.
void add_experiment_options(CLI::App* cmd, ExpArgs& args, bool with_sweep) {
  cmd->add_option_function<std::string>(
         "--config", [&args](const std::string& v) { args.config_path = v; },
         "key = value config file (CLI flags override it)")
      ->check(CLI::ExistingFile);
  auto kv = [&args](const char* key) {
    return [key, &args](const std::string& v) { args.kv.emplace_back(key, v); };
  };
  cmd->add_option_function<std::string>("--seed", kv("seed"), "RNG seed for channel generation");
  cmd->add_option_function<std::string>("--ls", kv("ls"), "source filter order (default 30)");
  cmd->add_option_function<std::string>("--lr", kv("lr"), "relay filter order (default 20)");
  cmd->add_option_function<std::string>("--channel-order", kv("channel_order"),
                                        "propagation channel order L (default 5)");
  cmd->add_option_function<std::string>("--variances", kv("variances"),
                                        "per-channel tap variances sd,sr,rd");
  cmd->add_option_function<std::string>("--sigma2", kv("sigma2"), "noise variance (default 1)");
  cmd->add_option_function<std::string>("--grid", kv("grid"),
                                        "quadrature node count (default 512)");
  cmd->add_option_function<std::string>("--max-iters", kv("max_iters"),
                                        "iteration cap (default 1000)");
  cmd->add_option_function<std::string>("--tol", kv("tol"),
                                        "stopping threshold on the relative squared update");
  cmd->add_option_function<std::string>("--step-mode", kv("step_mode"),
                                        "normalized | polyak_level");
  cmd->add_option_function<std::string>("--mu0", kv("mu0"), "step scale mu_n = mu0/sqrt(n)");
  cmd->add_option_function<std::string>("--init", kv("init"), "full_power | flat | af");
  cmd->add_option_function<std::string>("--algorithm", kv("algorithm"),
                                        "two_step | xi_reference");
  cmd->add_flag_function(
      "--strictly-causal",
      [&args](int64_t) { args.kv.emplace_back("strictly_causal", "1"); },
      "pin t0 = h0 = 0 (one-sample processing delay)");
  if (with_sweep) {
    cmd->add_option_function<std::string>("--trials", kv("trials"),
                                          "channel realizations per sweep point (default 100)");
    cmd->add_option_function<std::string>("--sweep", kv("sweep"),
                                          "comma list of ps or ps:pr budget points");
    cmd->add_option_function<std::string>("--causal-mode", kv("causal_mode"),
                                          "causal | strict | both (default both)");
    cmd->add_option_function<std::string>("--baselines", kv("baselines"),
                                          "subset of af_flat,one_tap,lpf");
    cmd->add_flag_function(
        "--deterministic",
        [&args](int64_t) { args.kv.emplace_back("deterministic", "1"); },
        "zero wall-time columns for byte-stable CSVs");
    cmd->add_option_function<std::string>("--workers", kv("workers"),
                                          "worker threads (0 = hardware)");
  }
}

[[noreturn]] void die(const std::string& where, ltir_status s) {
  std::fprintf(stderr, "ltirelay: %s: %s (%s)\n", where.c_str(), ltir_status_name(s),
               ltir_last_error());
  std::exit(1);
}

void check(const std::string& where, ltir_status s) {
  if (s != LTIR_OK) die(where, s);
}

ltir_experiment* make_experiment(const ExpArgs& args) {
  ltir_experiment* e = nullptr;
  check("experiment", ltir_experiment_create(&e));
  if (!args.config_path.empty())
    check("config: " + args.config_path, ltir_experiment_load(e, args.config_path.c_str()));
  for (const auto& [k, v] : args.kv)
    check("option " + k, ltir_experiment_set(e, k.c_str(), v.c_str()));
  return e;
}

struct ChannelArgs {
  std::string path;
  uint64_t seed = 1;
  uint64_t trial = 0;
  int order = 5;
  std::vector<double> variances{1.0, 1.0, 1.0};  // sd, sr, rd
};

void add_channel_options(CLI::App* cmd, ChannelArgs& ch) {
  cmd->add_option("--channel", ch.path,
                  "channel file: three tap lines (S-R, R-D, S-D); overrides generation")
      ->check(CLI::ExistingFile);
  cmd->add_option("--channel-seed", ch.seed, "seed when generating the channel (default 1)");
  cmd->add_option("--trial", ch.trial, "trial index for generation (default 0)");
}

ltir_channel* make_channel(const ChannelArgs& args) {
  ltir_channel* ch = nullptr;
  if (!args.path.empty()) {
    check("channel load", ltir_channel_load(args.path.c_str(), &ch));
  } else {
    check("channel generate",
          ltir_channel_generate(args.seed, args.trial, args.order, args.variances[1],
                                args.variances[2], args.variances[0], &ch));
  }
  return ch;
}

// The generation parameters ride on the shared experiment keys.
void sync_channel_args(const ExpArgs& exp, ChannelArgs& ch) {
  for (const auto& [k, v] : exp.kv) {
    if (k == "channel_order") ch.order = std::stoi(v);
    if (k == "seed") ch.seed = std::stoull(v);
    if (k == "variances") {
      double sd, sr, rd;
      if (std::sscanf(v.c_str(), "%lf,%lf,%lf", &sd, &sr, &rd) == 3)
        ch.variances = {sd, sr, rd};
    }
  }
}

double kv_double(const ExpArgs& exp, const std::string& key, double fallback) {
  for (const auto& [k, v] : exp.kv)
    if (k == key) fallback = std::stod(v);
  return fallback;
}

void print_taps(const char* label, const std::vector<double>& taps) {
  std::printf("%s:", label);
  for (double v : taps) std::printf(" %.9g", v);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint source/relay FIR filter design for the LTI Gaussian relay channel"};
  app.require_subcommand(1);

  // ---- design ----
  auto* design_cmd = app.add_subcommand("design", "design filters for a single channel");
  ExpArgs design_exp;
  ChannelArgs design_ch;
  double d_ps = 1.0, d_pr = 1.0;
  std::string d_out, d_trace;
  add_experiment_options(design_cmd, design_exp, false);
  add_channel_options(design_cmd, design_ch);
  design_cmd->add_option("--ps", d_ps, "source power budget");
  design_cmd->add_option("--pr", d_pr, "relay power budget");
  design_cmd->add_option("--out", d_out, "write designed taps (source line, relay line)");
  design_cmd->add_option("--trace", d_trace, "write the PSD / noise-level table CSV");

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo budget sweep, CSV outputs");
  ExpArgs sweep_exp;
  std::string sweep_out = "sweep";
  add_experiment_options(sweep_cmd, sweep_exp, true);
  sweep_cmd->add_option("--out", sweep_out,
                        "output prefix for <prefix>_summary.csv and <prefix>_trials.csv");

  // ---- trace ----
  auto* trace_cmd = app.add_subcommand("trace", "PSD / noise-level table for one channel");
  ExpArgs trace_exp;
  ChannelArgs trace_ch;
  double t_ps = 1.0, t_pr = 1.0;
  std::string t_out = "trace.csv";
  add_experiment_options(trace_cmd, trace_exp, false);
  add_channel_options(trace_cmd, trace_ch);
  trace_cmd->add_option("--ps", t_ps, "source power budget");
  trace_cmd->add_option("--pr", t_pr, "relay power budget");
  trace_cmd->add_option("--out", t_out, "output CSV path");

  // ---- flat ----
  auto* flat_cmd = app.add_subcommand("flat", "flat-fading baselines (H_sd=1, H_sr=a, H_rd=b)");
  double f_a = 1.0, f_b = 2.0, f_ps = 1.0, f_pr = 1.0, f_sigma2 = 1.0, f_wc = -1.0;
  int f_delay = 1, f_grid = 512;
  flat_cmd->add_option("--a", f_a, "S-R gain");
  flat_cmd->add_option("--b", f_b, "R-D gain");
  flat_cmd->add_option("--ps", f_ps, "source power");
  flat_cmd->add_option("--pr", f_pr, "relay power");
  flat_cmd->add_option("--sigma2", f_sigma2, "noise variance");
  flat_cmd->add_option("--omega-c", f_wc, "LPF cutoff in radians; <= 0 optimizes it");
  flat_cmd->add_option("--delay", f_delay, "one-tap relay delay (>= 1)");
  flat_cmd->add_option("--grid", f_grid, "quadrature nodes for the one-tap water-filling");

  // ---- oracle ----
  auto* oracle_cmd = app.add_subcommand("oracle", "finite-n Toeplitz rate convergence table");
  ExpArgs oracle_exp;
  ChannelArgs oracle_ch;
  double o_ps = 1.0, o_pr = 1.0;
  std::vector<int> o_ns{64, 128, 256, 512};
  add_experiment_options(oracle_cmd, oracle_exp, false);
  add_channel_options(oracle_cmd, oracle_ch);
  oracle_cmd->add_option("--ps", o_ps, "source power budget");
  oracle_cmd->add_option("--pr", o_pr, "relay power budget");
  oracle_cmd->add_option("--ns", o_ns, "block lengths, ascending")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  if (design_cmd->parsed()) {
    ltir_experiment* e = make_experiment(design_exp);
    sync_channel_args(design_exp, design_ch);
    ltir_channel* ch = make_channel(design_ch);
    ltir_design_result* r = nullptr;
    check("design", ltir_experiment_design(e, ch, d_ps, d_pr, &r));
    const double sigma2 = kv_double(design_exp, "sigma2", 1.0);
    double af_rate = 0, af_gain = 0;
    ltir_grid* g = nullptr;
    check("grid", ltir_grid_create(static_cast<int>(kv_double(design_exp, "grid", 512)), &g));
    check("af baseline",
          ltir_af_baseline(ch, g, ltir_budget{d_ps, d_pr, sigma2}, &af_rate, &af_gain, nullptr));
    std::printf("designed_rate_bits: %.9g\n", ltir_design_rate(r));
    std::printf("af_rate_bits: %.9g (gain %.9g)\n", af_rate, af_gain);
    std::printf("iterations: %d converged: %d\n", ltir_design_iterations(r),
                ltir_design_converged(r));
    std::printf("source_power: %.9g relay_power: %.9g\n", ltir_design_source_power(r),
                ltir_design_relay_power(r));
    const int nls = static_cast<int>(kv_double(design_exp, "ls", 30));
    const int nlr = static_cast<int>(kv_double(design_exp, "lr", 20));
    std::vector<double> t_taps(nls), h_taps(nlr);
    check("taps", ltir_design_source_taps(r, t_taps.data(), nls));
    check("taps", ltir_design_relay_taps(r, h_taps.data(), nlr));
    print_taps("source_taps", t_taps);
    print_taps("relay_taps", h_taps);
    if (!d_out.empty()) {
      FILE* f = std::fopen(d_out.c_str(), "w");
      if (!f) die("open " + d_out, LTIR_ERR_IO);
      for (const auto* taps : {&t_taps, &h_taps}) {
        for (size_t i = 0; i < taps->size(); ++i)
          std::fprintf(f, "%s%.17g", i ? " " : "", (*taps)[i]);
        std::fprintf(f, "\n");
      }
      std::fclose(f);
    }
    if (!d_trace.empty()) {
      double dr = 0, ar = 0;
      check("trace", ltir_trace_run(e, ch, d_ps, d_pr, d_trace.c_str(), &dr, &ar));
    }
    ltir_grid_destroy(g);
    ltir_design_result_destroy(r);
    ltir_channel_destroy(ch);
    ltir_experiment_destroy(e);
    return 0;
  }

  if (sweep_cmd->parsed()) {
    ltir_experiment* e = make_experiment(sweep_exp);
    check("sweep", ltir_sweep_run(e, sweep_out.c_str()));
    std::printf("wrote %s_summary.csv and %s_trials.csv\n", sweep_out.c_str(),
                sweep_out.c_str());
    ltir_experiment_destroy(e);
    return 0;
  }

  if (trace_cmd->parsed()) {
    ltir_experiment* e = make_experiment(trace_exp);
    sync_channel_args(trace_exp, trace_ch);
    ltir_channel* ch = make_channel(trace_ch);
    double dr = 0, ar = 0;
    check("trace", ltir_trace_run(e, ch, t_ps, t_pr, t_out.c_str(), &dr, &ar));
    std::printf("designed_rate_bits: %.9g\naf_rate_bits: %.9g\nwrote %s\n", dr, ar,
                t_out.c_str());
    ltir_channel_destroy(ch);
    ltir_experiment_destroy(e);
    return 0;
  }

  if (flat_cmd->parsed()) {
    const ltir_budget budget{f_ps, f_pr, f_sigma2};
    double gain = 0, rate = 0;
    check("flat af", ltir_flat_af(f_a, f_b, budget, &gain, &rate));
    std::printf("af: d = %.9g rate = %.9g\n", gain, rate);
    check("flat equalizing", ltir_flat_equalizing(f_a, f_b, budget, &gain, &rate));
    std::printf("equalizing: d = %.9g rate = %.9g\n", gain, rate);
    check("flat one-tap",
          ltir_flat_one_tap_delayed(f_a, f_b, budget, f_delay, f_grid, &rate));
    std::printf("one_tap(delay=%d): rate = %.9g\n", f_delay, rate);
    ltir_lpf_solution lpf;
    check("flat lpf", ltir_flat_lpf(f_a, f_b, budget, f_wc, &lpf));
    static const char* kTypes[] = {"T1-1", "T1-2", "T2", "T3"};
    std::printf("lpf(omega_c = %.9g%s): delta = %.9g rate = %.9g type = %s\n", lpf.omega_c,
                f_wc <= 0 ? ", optimized" : "", lpf.delta, lpf.rate_bits,
                kTypes[lpf.sol_type]);
    std::printf("lpf powers: pass = %.9g stop = %.9g duals: lambda = %.9g nu = %.9g\n",
                lpf.p_pass, lpf.p_stop, lpf.lambda, lpf.nu);
    return 0;
  }

  if (oracle_cmd->parsed()) {
    ltir_experiment* e = make_experiment(oracle_exp);
    sync_channel_args(oracle_exp, oracle_ch);
    ltir_channel* ch = make_channel(oracle_ch);
    std::vector<double> rates(o_ns.size()), gaps(o_ns.size());
    check("oracle", ltir_convergence_table(e, ch, o_ps, o_pr, o_ns.data(),
                                           static_cast<int>(o_ns.size()), rates.data(),
                                           gaps.data()));
    std::printf("n,finite_n_rate,gap_to_frequency_rate\n");
    for (size_t i = 0; i < o_ns.size(); ++i)
      std::printf("%d,%.9g,%.9g\n", o_ns[i], rates[i], gaps[i]);
    ltir_channel_destroy(ch);
    ltir_experiment_destroy(e);
    return 0;
  }

  return 0;
}
