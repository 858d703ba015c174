#pragma once

#include <vector>

#include "core/fir.hpp"
#include "core/objective.hpp"
#include "core/projections.hpp"
#include "core/quadrature.hpp"

namespace ltir {

enum class StepMode {
  normalized,    // s_n = mu_n / ||phi'||
  polyak_level,  // s_n = mu_n max(phi_n - level, 0) / ||phi'||^2
};

enum class Algorithm {
  two_step,      // production path: ball then induced ellipsoid
  xi_reference,  // cyclic projections onto sampled surface ellipsoids
};

enum class InitMode {
  full_power_relay,  // t = [sqrt(Ps), 0, ...], h = proj of all-ones (full relay power)
  flat_source,       // t = sqrt(Ps/Ls) * ones, h = 0
  af_point,          // white source + best single-tap AF gain
};

struct OptimizerConfig {
  int max_iters = 1000;
  double rel_tol = 1e-5;  // on ||u_{n+1} - u_n||^2 / ||u_n||^2
  StepMode step_mode = StepMode::normalized;
  double mu0 = 1.0;        // mu_n = mu0/sqrt(n), or mu0 when !sqrt_decay
  bool sqrt_decay = true;
  double level_slack = -1.0;  // polyak_level; < 0 selects 0.1 |phi(u0)|
  bool strictly_causal = false;  // pin t_0 = h_0 = 0
  Algorithm algorithm = Algorithm::two_step;
  InitMode init = InitMode::full_power_relay;
  int xi_samples = 0;  // xi_reference surface samples; 0 = 2*ls^2
  int xi_sweeps = 8;
};

struct TraceRow {
  double rate;
  double grad_norm;
  double source_power;
  double relay_power;
  double step;
};
using OptimizerTrace = std::vector<TraceRow>;

struct DesignOutcome {
  DesignPoint point;
  RateReport report;
  OptimizerTrace trace;
};

// mu_n on the 1-based iteration index.
double step_scale(int n, double mu0, bool sqrt_decay);

// Step length for the projected subgradient update. grad_norm must be > 0.
double step_length(StepMode mode, int n, double phi_n, double grad_norm, double level,
                   double mu0 = 1.0, bool sqrt_decay = true);

// Projected subgradient design of (t, h). Every iterate is feasible; the
// best-rate iterate seen is returned (not the last).
DesignOutcome design(const ChannelTriple& ch, const PowerBudget& budget, int ls, int lr,
                     const OptimizerConfig& cfg, const QuadratureGrid& grid);

// AF reference: white source t = [sqrt(Ps)] (flat input spectrum) and the
// best scalar relay gain within the relay power budget.
struct AfBaseline {
  RateReport report;
  double gain = 0.0;
};
AfBaseline af_baseline(const ChannelTriple& ch, const PowerBudget& budget,
                       const QuadratureGrid& grid);

}  // namespace ltir
