#include "ltirelay.h"

#include <cstring>
#include <string>

#include "core/errors.hpp"
#include "core/flatfading.hpp"
#include "core/harness.hpp"
#include "core/optimizer.hpp"
#include "core/toeplitz.hpp"

namespace {

thread_local std::string g_last_error;

ltir_status fail(ltir_status s, const char* what) {
  g_last_error = what ? what : "";
  return s;
}

// Maps core exceptions onto status codes; the handler body runs under try.
template <typename Fn>
ltir_status guarded(Fn&& fn) {
  try {
    fn();
    return LTIR_OK;
  } catch (const ltir::NonFiniteIntegrand& e) {
    return fail(LTIR_ERR_NONFINITE, e.what());
  } catch (const ltir::SingularForm& e) {
    return fail(LTIR_ERR_SINGULAR, e.what());
  } catch (const ltir::DegenerateChannel& e) {
    return fail(LTIR_ERR_DEGENERATE, e.what());
  } catch (const ltir::NumericalRankLoss& e) {
    return fail(LTIR_ERR_RANK_LOSS, e.what());
  } catch (const ltir::InfeasibleBand& e) {
    return fail(LTIR_ERR_BAND, e.what());
  } catch (const ltir::InvalidArgument& e) {
    return fail(LTIR_ERR_INVALID_ARG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LTIR_ERR_INVALID_ARG, e.what());
  } catch (const std::exception& e) {
    return fail(LTIR_ERR_INTERNAL, e.what());
  }
}

ltir::PowerBudget to_budget(const ltir_budget& b) { return {b.ps, b.pr, b.sigma2}; }

ltir::OptimizerConfig to_config(const ltir_design_config* cfg) {
  ltir::OptimizerConfig c;
  if (!cfg) return c;
  c.max_iters = cfg->max_iters;
  c.rel_tol = cfg->rel_tol;
  c.step_mode = cfg->step_mode == LTIR_STEP_POLYAK_LEVEL ? ltir::StepMode::polyak_level
                                                         : ltir::StepMode::normalized;
  c.mu0 = cfg->mu0;
  c.sqrt_decay = cfg->sqrt_decay != 0;
  c.level_slack = cfg->level_slack;
  c.strictly_causal = cfg->strictly_causal != 0;
  c.algorithm = cfg->algorithm == LTIR_ALG_XI_REFERENCE ? ltir::Algorithm::xi_reference
                                                        : ltir::Algorithm::two_step;
  c.init = cfg->init_mode == LTIR_INIT_FLAT_SOURCE  ? ltir::InitMode::flat_source
           : cfg->init_mode == LTIR_INIT_AF_POINT   ? ltir::InitMode::af_point
                                                    : ltir::InitMode::full_power_relay;
  return c;
}

ltir_status copy_taps(const std::vector<double>& taps, double* out, int cap) {
  if (!out || cap < static_cast<int>(taps.size()))
    return fail(LTIR_ERR_INVALID_ARG, "output buffer too small");
  std::memcpy(out, taps.data(), taps.size() * sizeof(double));
  return LTIR_OK;
}

}  // namespace

struct ltir_grid {
  ltir::QuadratureGrid grid;
};

struct ltir_channel {
  ltir::ChannelTriple ch;
};

struct ltir_design_result {
  ltir::DesignOutcome out;
};

struct ltir_experiment {
  ltir::ExperimentSpec spec;
};

extern "C" {

const char* ltir_status_name(ltir_status s) {
  switch (s) {
    case LTIR_OK: return "ok";
    case LTIR_ERR_INVALID_ARG: return "invalid argument";
    case LTIR_ERR_NONFINITE: return "non-finite integrand";
    case LTIR_ERR_SINGULAR: return "singular form";
    case LTIR_ERR_DEGENERATE: return "degenerate channel";
    case LTIR_ERR_RANK_LOSS: return "numerical rank loss";
    case LTIR_ERR_BAND: return "infeasible band";
    case LTIR_ERR_IO: return "io error";
    case LTIR_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* ltir_last_error(void) { return g_last_error.c_str(); }

ltir_status ltir_grid_create(int nodes, ltir_grid** out) {
  if (!out) return fail(LTIR_ERR_INVALID_ARG, "out is null");
  *out = nullptr;
  return guarded([&] { *out = new ltir_grid{ltir::QuadratureGrid(nodes)}; });
}

void ltir_grid_destroy(ltir_grid* g) { delete g; }

int ltir_grid_size(const ltir_grid* g) { return g ? g->grid.size() : 0; }

ltir_status ltir_grid_points(const ltir_grid* g, double* nodes, double* weights, int cap) {
  if (!g) return fail(LTIR_ERR_INVALID_ARG, "grid is null");
  if (cap < g->grid.size()) return fail(LTIR_ERR_INVALID_ARG, "buffer too small");
  if (nodes)
    std::memcpy(nodes, g->grid.nodes().data(), g->grid.size() * sizeof(double));
  if (weights)
    std::memcpy(weights, g->grid.weights().data(), g->grid.size() * sizeof(double));
  return LTIR_OK;
}

ltir_status ltir_channel_create(const double* h_sr, const double* h_rd, const double* h_sd,
                                int order, ltir_channel** out) {
  if (!out || !h_sr || !h_rd || !h_sd) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  *out = nullptr;
  return guarded([&] {
    if (order < 1) throw ltir::InvalidArgument("channel order must be >= 1");
    auto mk = [order](const double* p) {
      return ltir::FirFilter(std::vector<double>(p, p + order));
    };
    *out = new ltir_channel{ltir::ChannelTriple(mk(h_sr), mk(h_rd), mk(h_sd))};
  });
}

ltir_status ltir_channel_generate(uint64_t seed, uint64_t trial, int order, double var_sr,
                                  double var_rd, double var_sd, ltir_channel** out) {
  if (!out) return fail(LTIR_ERR_INVALID_ARG, "out is null");
  *out = nullptr;
  return guarded([&] {
    *out = new ltir_channel{
        ltir::generate_channels(seed, trial, order, var_sr, var_rd, var_sd)};
  });
}

ltir_status ltir_channel_load(const char* path, ltir_channel** out) {
  if (!out || !path) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new ltir_channel{ltir::load_channel_file(path)}; });
}

ltir_status ltir_channel_save(const ltir_channel* ch, const char* path) {
  if (!ch || !path) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  return guarded([&] { ltir::save_channel_file(ch->ch, path); });
}

void ltir_channel_destroy(ltir_channel* ch) { delete ch; }

int ltir_channel_order(const ltir_channel* ch) { return ch ? ch->ch.order() : 0; }

ltir_status ltir_channel_taps(const ltir_channel* ch, int which, double* out, int cap) {
  if (!ch) return fail(LTIR_ERR_INVALID_ARG, "channel is null");
  const ltir::FirFilter* f = nullptr;
  switch (which) {
    case LTIR_CH_SR: f = &ch->ch.sr; break;
    case LTIR_CH_RD: f = &ch->ch.rd; break;
    case LTIR_CH_SD: f = &ch->ch.sd; break;
    default: return fail(LTIR_ERR_INVALID_ARG, "which must be LTIR_CH_*");
  }
  return copy_taps(f->taps, out, cap);
}

ltir_status ltir_rate(const ltir_channel* ch, const ltir_grid* grid, double sigma2,
                      const double* t, int ls, const double* h, int lr, double* out) {
  if (!ch || !grid || !t || !h || !out) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    ltir::DesignPoint u{ltir::FirFilter(std::vector<double>(t, t + ls)),
                        ltir::FirFilter(std::vector<double>(h, h + lr))};
    *out = ltir::rate(u, ch->ch, grid->grid, sigma2);
  });
}

ltir_status ltir_finite_n_rate(const ltir_channel* ch, double sigma2, const double* t, int ls,
                               const double* h, int lr, int n, double* out) {
  if (!ch || !t || !h || !out) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    ltir::DesignPoint u{ltir::FirFilter(std::vector<double>(t, t + ls)),
                        ltir::FirFilter(std::vector<double>(h, h + lr))};
    *out = ltir::finite_n_rate(u, ch->ch, sigma2, n);
  });
}

void ltir_design_config_init(ltir_design_config* cfg) {
  if (!cfg) return;
  cfg->max_iters = 1000;
  cfg->rel_tol = 1e-5;
  cfg->step_mode = LTIR_STEP_NORMALIZED;
  cfg->mu0 = 1.0;
  cfg->sqrt_decay = 1;
  cfg->level_slack = -1.0;
  cfg->strictly_causal = 0;
  cfg->algorithm = LTIR_ALG_TWO_STEP;
  cfg->init_mode = LTIR_INIT_FULL_POWER_RELAY;
}

ltir_status ltir_design_run(const ltir_channel* ch, const ltir_grid* grid, ltir_budget budget,
                            int ls, int lr, const ltir_design_config* cfg,
                            ltir_design_result** out) {
  if (!ch || !grid || !out) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new ltir_design_result{
        ltir::design(ch->ch, to_budget(budget), ls, lr, to_config(cfg), grid->grid)};
  });
}

void ltir_design_result_destroy(ltir_design_result* r) { delete r; }

double ltir_design_rate(const ltir_design_result* r) { return r ? r->out.report.rate_bits : 0; }
int ltir_design_iterations(const ltir_design_result* r) {
  return r ? r->out.report.iterations : 0;
}
int ltir_design_converged(const ltir_design_result* r) {
  return r && r->out.report.converged ? 1 : 0;
}
double ltir_design_source_power(const ltir_design_result* r) {
  return r ? r->out.report.source_power_used : 0;
}
double ltir_design_relay_power(const ltir_design_result* r) {
  return r ? r->out.report.relay_power_used : 0;
}

ltir_status ltir_design_source_taps(const ltir_design_result* r, double* out, int cap) {
  if (!r) return fail(LTIR_ERR_INVALID_ARG, "result is null");
  return copy_taps(r->out.point.t.taps, out, cap);
}

ltir_status ltir_design_relay_taps(const ltir_design_result* r, double* out, int cap) {
  if (!r) return fail(LTIR_ERR_INVALID_ARG, "result is null");
  return copy_taps(r->out.point.h.taps, out, cap);
}

int ltir_design_trace_length(const ltir_design_result* r) {
  return r ? static_cast<int>(r->out.trace.size()) : 0;
}

ltir_status ltir_design_trace_row(const ltir_design_result* r, int i, double* rate,
                                  double* grad_norm, double* source_power, double* relay_power,
                                  double* step) {
  if (!r || i < 0 || i >= static_cast<int>(r->out.trace.size()))
    return fail(LTIR_ERR_INVALID_ARG, "trace index out of range");
  const ltir::TraceRow& row = r->out.trace[i];
  if (rate) *rate = row.rate;
  if (grad_norm) *grad_norm = row.grad_norm;
  if (source_power) *source_power = row.source_power;
  if (relay_power) *relay_power = row.relay_power;
  if (step) *step = row.step;
  return LTIR_OK;
}

ltir_status ltir_af_baseline(const ltir_channel* ch, const ltir_grid* grid, ltir_budget budget,
                             double* rate, double* gain, double* relay_power) {
  if (!ch || !grid) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const ltir::AfBaseline af = ltir::af_baseline(ch->ch, to_budget(budget), grid->grid);
    if (rate) *rate = af.report.rate_bits;
    if (gain) *gain = af.gain;
    if (relay_power) *relay_power = af.report.relay_power_used;
  });
}

ltir_status ltir_flat_af(double a, double b, ltir_budget budget, double* gain, double* rate) {
  return guarded([&] {
    const ltir::AfSolution s = ltir::af_optimal({a, b}, to_budget(budget));
    if (gain) *gain = s.gain;
    if (rate) *rate = s.rate_bits;
  });
}

ltir_status ltir_flat_one_tap_delayed(double a, double b, ltir_budget budget, int delay,
                                      int grid_nodes, double* rate) {
  if (!rate) return fail(LTIR_ERR_INVALID_ARG, "rate is null");
  return guarded([&] {
    ltir::QuadratureGrid grid(grid_nodes);
    *rate = ltir::one_tap_delayed_rate({a, b}, to_budget(budget), delay, grid);
  });
}

ltir_status ltir_flat_equalizing(double a, double b, ltir_budget budget, double* gain,
                                 double* rate) {
  return guarded([&] {
    const ltir::AfSolution s = ltir::equalizing_rate({a, b}, to_budget(budget));
    if (gain) *gain = s.gain;
    if (rate) *rate = s.rate_bits;
  });
}

ltir_status ltir_flat_lpf(double a, double b, ltir_budget budget, double omega_c,
                          ltir_lpf_solution* out) {
  if (!out) return fail(LTIR_ERR_INVALID_ARG, "out is null");
  return guarded([&] {
    const ltir::LpfSolution s = omega_c <= 0
                                    ? ltir::lpf_design_optimized({a, b}, to_budget(budget))
                                    : ltir::lpf_design({a, b}, to_budget(budget), omega_c);
    out->delta = s.delta;
    out->omega_c = s.omega_c;
    out->p_pass = s.p_pass;
    out->p_stop = s.p_stop;
    out->lambda = s.lambda;
    out->nu = s.nu;
    out->eta_pass = s.eta_pass;
    out->level_pass = s.level_pass;
    out->level_stop = s.level_stop;
    out->rate_bits = s.rate_bits;
    switch (s.sol_type) {
      case ltir::LpfType::T1_1: out->sol_type = LTIR_LPF_T1_1; break;
      case ltir::LpfType::T1_2: out->sol_type = LTIR_LPF_T1_2; break;
      case ltir::LpfType::T2: out->sol_type = LTIR_LPF_T2; break;
      case ltir::LpfType::T3: out->sol_type = LTIR_LPF_T3; break;
    }
  });
}

ltir_status ltir_experiment_create(ltir_experiment** out) {
  if (!out) return fail(LTIR_ERR_INVALID_ARG, "out is null");
  *out = new ltir_experiment{};
  return LTIR_OK;
}

void ltir_experiment_destroy(ltir_experiment* e) { delete e; }

ltir_status ltir_experiment_set(ltir_experiment* e, const char* key, const char* value) {
  if (!e || !key || !value) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  return guarded([&] { ltir::apply_key_value(e->spec, key, value); });
}

ltir_status ltir_experiment_load(ltir_experiment* e, const char* path) {
  if (!e || !path) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  return guarded([&] { e->spec = ltir::parse_config_file(path); });
}

ltir_status ltir_sweep_run(const ltir_experiment* e, const char* out_prefix) {
  if (!e || !out_prefix) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const ltir::SweepResult r = ltir::run_sweep(e->spec);
    const std::string prefix(out_prefix);
    ltir::write_file(prefix + "_summary.csv", ltir::summary_csv(r));
    ltir::write_file(prefix + "_trials.csv", ltir::detail_csv(r));
  });
}

ltir_status ltir_trace_run(const ltir_experiment* e, const ltir_channel* ch, double ps,
                           double pr, const char* out_path, double* designed_rate,
                           double* af_rate) {
  if (!e || !ch || !out_path) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const ltir::TraceTable t =
        ltir::trace_instance(ch->ch, {ps, pr, e->spec.sigma2}, e->spec);
    ltir::write_file(out_path, ltir::trace_csv(t));
    if (designed_rate) *designed_rate = t.designed_rate;
    if (af_rate) *af_rate = t.af_rate;
  });
}

ltir_status ltir_experiment_design(const ltir_experiment* e, const ltir_channel* ch, double ps,
                                   double pr, ltir_design_result** out) {
  if (!e || !ch || !out) return fail(LTIR_ERR_INVALID_ARG, "null argument");
  *out = nullptr;
  return guarded([&] {
    ltir::OptimizerConfig cfg = e->spec.opt;
    cfg.strictly_causal = e->spec.causal_mode == ltir::CausalMode::strictly_causal;
    ltir::QuadratureGrid grid(e->spec.grid_size);
    *out = new ltir_design_result{ltir::design(
        ch->ch, {ps, pr, e->spec.sigma2}, e->spec.ls, e->spec.lr, cfg, grid)};
  });
}

ltir_status ltir_convergence_table(const ltir_experiment* e, const ltir_channel* ch, double ps,
                                   double pr, const int* ns, int ns_len, double* finite_rates,
                                   double* gaps) {
  if (!e || !ch || !ns || ns_len < 1 || !finite_rates || !gaps)
    return fail(LTIR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    ltir::OptimizerConfig cfg = e->spec.opt;
    cfg.strictly_causal = e->spec.causal_mode == ltir::CausalMode::strictly_causal;
    ltir::QuadratureGrid grid(e->spec.grid_size);
    const ltir::PowerBudget budget{ps, pr, e->spec.sigma2};
    const ltir::DesignOutcome out = ltir::design(ch->ch, budget, e->spec.ls, e->spec.lr, cfg, grid);
    const auto rows = ltir::convergence_report(out.point, ch->ch, e->spec.sigma2,
                                               std::vector<int>(ns, ns + ns_len), grid);
    for (int i = 0; i < ns_len; ++i) {
      finite_rates[i] = rows[i].finite_rate;
      gaps[i] = rows[i].gap;
    }
  });
}

}  // extern "C"
