/* ltirelay: joint source/relay FIR filter design for the LTI Gaussian relay
 * channel. C API over the C++ core; all handles are opaque and owned by the
 * library, all functions return a status code. Objects are immutable after
 * creation unless noted, and distinct handles may be used concurrently. */

#ifndef LTIRELAY_H
#define LTIRELAY_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ltir_status {
  LTIR_OK = 0,
  LTIR_ERR_INVALID_ARG = 1,
  LTIR_ERR_NONFINITE = 2,   /* non-finite quadrature integrand */
  LTIR_ERR_SINGULAR = 3,    /* relay form failed positive-definiteness */
  LTIR_ERR_DEGENERATE = 4,  /* all channels identically zero */
  LTIR_ERR_RANK_LOSS = 5,   /* finite-block Cholesky failed */
  LTIR_ERR_BAND = 6,        /* low-pass cutoff outside (0, pi] */
  LTIR_ERR_IO = 7,
  LTIR_ERR_INTERNAL = 8
} ltir_status;

const char* ltir_status_name(ltir_status s);
/* Detail message for the most recent failure on this thread. */
const char* ltir_last_error(void);

/* -------- quadrature grid -------- */

typedef struct ltir_grid ltir_grid;

ltir_status ltir_grid_create(int nodes, ltir_grid** out);
void ltir_grid_destroy(ltir_grid* g);
int ltir_grid_size(const ltir_grid* g);
/* Fills nodes and/or weights (either may be NULL); cap is the buffer length. */
ltir_status ltir_grid_points(const ltir_grid* g, double* nodes, double* weights, int cap);

/* -------- channels -------- */

typedef struct ltir_channel ltir_channel;

enum { LTIR_CH_SR = 0, LTIR_CH_RD = 1, LTIR_CH_SD = 2 };

ltir_status ltir_channel_create(const double* h_sr, const double* h_rd, const double* h_sd,
                                int order, ltir_channel** out);
/* Gaussian taps keyed by (seed, trial, channel, tap index); deterministic. */
ltir_status ltir_channel_generate(uint64_t seed, uint64_t trial, int order, double var_sr,
                                  double var_rd, double var_sd, ltir_channel** out);
/* Text file with three tap lines: S-R, R-D, S-D. */
ltir_status ltir_channel_load(const char* path, ltir_channel** out);
ltir_status ltir_channel_save(const ltir_channel* ch, const char* path);
void ltir_channel_destroy(ltir_channel* ch);
int ltir_channel_order(const ltir_channel* ch);
ltir_status ltir_channel_taps(const ltir_channel* ch, int which, double* out, int cap);

/* -------- budget and rate evaluation -------- */

typedef struct ltir_budget {
  double ps;
  double pr;
  double sigma2;
} ltir_budget;

/* Frequency-domain achievable rate of the pair (t, h), bits/channel use. */
ltir_status ltir_rate(const ltir_channel* ch, const ltir_grid* grid, double sigma2,
                      const double* t, int ls, const double* h, int lr, double* out);

/* Finite-n Toeplitz oracle: log-det mutual information of the block model. */
ltir_status ltir_finite_n_rate(const ltir_channel* ch, double sigma2, const double* t, int ls,
                               const double* h, int lr, int n, double* out);

/* -------- joint design -------- */

enum { LTIR_STEP_NORMALIZED = 0, LTIR_STEP_POLYAK_LEVEL = 1 };
enum { LTIR_ALG_TWO_STEP = 0, LTIR_ALG_XI_REFERENCE = 1 };
enum { LTIR_INIT_FULL_POWER_RELAY = 0, LTIR_INIT_FLAT_SOURCE = 1, LTIR_INIT_AF_POINT = 2 };

typedef struct ltir_design_config {
  int max_iters;       /* default 1000 */
  double rel_tol;      /* default 1e-5, on ||u_{n+1}-u_n||^2/||u_n||^2 */
  int step_mode;       /* LTIR_STEP_* */
  double mu0;          /* mu_n = mu0/sqrt(n) when sqrt_decay */
  int sqrt_decay;      /* nonzero = 1/sqrt(n) schedule */
  double level_slack;  /* polyak level slack; < 0 selects 0.1|phi(u0)| */
  int strictly_causal; /* pin t_0 = h_0 = 0 */
  int algorithm;       /* LTIR_ALG_* */
  int init_mode;       /* LTIR_INIT_* */
} ltir_design_config;

void ltir_design_config_init(ltir_design_config* cfg);

typedef struct ltir_design_result ltir_design_result;

ltir_status ltir_design_run(const ltir_channel* ch, const ltir_grid* grid, ltir_budget budget,
                            int ls, int lr, const ltir_design_config* cfg,
                            ltir_design_result** out);
void ltir_design_result_destroy(ltir_design_result* r);

double ltir_design_rate(const ltir_design_result* r);
int ltir_design_iterations(const ltir_design_result* r);
int ltir_design_converged(const ltir_design_result* r);
double ltir_design_source_power(const ltir_design_result* r);
double ltir_design_relay_power(const ltir_design_result* r);
ltir_status ltir_design_source_taps(const ltir_design_result* r, double* out, int cap);
ltir_status ltir_design_relay_taps(const ltir_design_result* r, double* out, int cap);
int ltir_design_trace_length(const ltir_design_result* r);
/* Per-iteration record: rate, ||gradient||, source power, relay power, step. */
ltir_status ltir_design_trace_row(const ltir_design_result* r, int i, double* rate,
                                  double* grad_norm, double* source_power, double* relay_power,
                                  double* step);

/* AF reference: flat input spectrum (white source at full power) with the best
 * feasible scalar relay gain. */
ltir_status ltir_af_baseline(const ltir_channel* ch, const ltir_grid* grid, ltir_budget budget,
                             double* rate, double* gain, double* relay_power);

/* -------- flat-fading baselines (H_sd = 1, H_sr = a, H_rd = b) -------- */

enum { LTIR_LPF_T1_1 = 0, LTIR_LPF_T1_2 = 1, LTIR_LPF_T2 = 2, LTIR_LPF_T3 = 3 };

typedef struct ltir_lpf_solution {
  double delta;
  double omega_c;
  double p_pass;
  double p_stop;
  double lambda;
  double nu;
  double eta_pass;
  double level_pass;
  double level_stop;
  double rate_bits;
  int sol_type; /* LTIR_LPF_* */
} ltir_lpf_solution;

ltir_status ltir_flat_af(double a, double b, ltir_budget budget, double* gain, double* rate);
ltir_status ltir_flat_one_tap_delayed(double a, double b, ltir_budget budget, int delay,
                                      int grid_nodes, double* rate);
ltir_status ltir_flat_equalizing(double a, double b, ltir_budget budget, double* gain,
                                 double* rate);
/* omega_c in (0, pi] for a fixed cutoff; omega_c <= 0 optimizes the cutoff. */
ltir_status ltir_flat_lpf(double a, double b, ltir_budget budget, double omega_c,
                          ltir_lpf_solution* out);

/* -------- experiments -------- */

typedef struct ltir_experiment ltir_experiment;

ltir_status ltir_experiment_create(ltir_experiment** out);
void ltir_experiment_destroy(ltir_experiment* e);
/* Flat keys mirroring the config file: seed, trials, variances, sweep, ls,
 * lr, channel_order, grid, max_iters, tol, causal_mode, deterministic, ... */
ltir_status ltir_experiment_set(ltir_experiment* e, const char* key, const char* value);
ltir_status ltir_experiment_load(ltir_experiment* e, const char* path);

/* Monte Carlo sweep; writes <prefix>_summary.csv and <prefix>_trials.csv. */
ltir_status ltir_sweep_run(const ltir_experiment* e, const char* out_prefix);

/* Per-frequency PSD / noise-level table for one channel; writes a CSV and
 * optionally returns the designed and AF rates. */
ltir_status ltir_trace_run(const ltir_experiment* e, const ltir_channel* ch, double ps,
                           double pr, const char* out_path, double* designed_rate,
                           double* af_rate);

/* Single design driven by the experiment's optimizer settings. */
ltir_status ltir_experiment_design(const ltir_experiment* e, const ltir_channel* ch, double ps,
                                   double pr, ltir_design_result** out);

/* Finite-n convergence table: rows of (n, finite rate, gap to the
 * frequency-domain rate). ns_len rows are written to the three arrays. */
ltir_status ltir_convergence_table(const ltir_experiment* e, const ltir_channel* ch, double ps,
                                   double pr, const int* ns, int ns_len, double* finite_rates,
                                   double* gaps);

#ifdef __cplusplus
}
#endif

#endif /* LTIRELAY_H */
