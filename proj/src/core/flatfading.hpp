#pragma once

#include "core/fir.hpp"
#include "core/quadrature.hpp"

namespace ltir {

// Flat channels: H_sd(z) = 1, H_sr(z) = a, H_rd(z) = b.
struct FlatChannel {
  double a;
  double b;
};

// KKT solution taxonomy for the ideal low-pass relay problem:
// T1_*: all source power in the passband; T1_2 additionally has the relay at
// full power. T2: power in both bands, relay power slack (one water level).
// T3: power in both bands, relay at full power (two water levels).
enum class LpfType { T1_1, T1_2, T2, T3 };
const char* to_string(LpfType t);

struct LpfSolution {
  double delta = 0.0;       // passband gain
  double omega_c = 0.0;     // cutoff, radians in (0, pi]
  double p_pass = 0.0;      // source power in [0, omega_c)
  double p_stop = 0.0;      // source power in [omega_c, pi]
  double lambda = 0.0;      // source power dual
  double nu = 0.0;          // relay power dual
  double eta_pass = 0.0;    // passband noise level (b^2 d^2 + 1) s2 / (1 + ab d)^2
  double level_pass = 0.0;  // water level l1 = 1/((2 ln2)(lambda + nu a^2 d^2))
  double level_stop = 0.0;  // water level l2 = 1/((2 ln2) lambda)
  LpfType sol_type = LpfType::T2;
  double rate_bits = 0.0;
};

struct AfSolution {
  double gain;
  double rate_bits;
};

// AF optimum: d* = min{a/b, sqrt(Pr/(a^2 Ps + s2))}.
AfSolution af_optimal(const FlatChannel& fc, const PowerBudget& budget);

// Best rate of H(z) = d z^-delay with water-filled source spectrum against the
// raised-cosine channel gain; maximized over the feasible d.
double one_tap_delayed_rate(const FlatChannel& fc, const PowerBudget& budget, int delay,
                            const QuadratureGrid& grid);

// Channel-equalizing source filter: sweeps the CNR in d and returns the
// analytic optimum d = 0, rate = 1/2 log2(1 + Ps/s2).
AfSolution equalizing_rate(const FlatChannel& fc, const PowerBudget& budget);

// Ideal low-pass relay at a fixed cutoff. Throws InfeasibleBand unless
// 0 < omega_c <= pi.
LpfSolution lpf_design(const FlatChannel& fc, const PowerBudget& budget, double omega_c);

// Outer scalar search over the cutoff (256 candidates on (0, pi] plus
// golden refinement; pi is always a candidate, so the result never falls
// below the AF rate).
LpfSolution lpf_design_optimized(const FlatChannel& fc, const PowerBudget& budget);

LpfType lpf_classify(const LpfSolution& sol, double tol = 1e-8);

}  // namespace ltir
