#pragma once

#include <vector>

#include <Eigen/Core>

#include "core/fir.hpp"
#include "core/objective.hpp"
#include "core/quadrature.hpp"

namespace ltir {

// Finite-block matrices: source covariance (symmetric Toeplitz from the tap
// autocorrelation) and the lower-triangular Toeplitz filtering matrices.
struct FiniteBlockModel {
  int n = 0;
  Eigen::MatrixXd sigma_x;
  Eigen::MatrixXd relay;  // H_n for the relay filter
  Eigen::MatrixXd sr, rd, sd;
};

FiniteBlockModel build_finite_block_model(const DesignPoint& u, const ChannelTriple& ch, int n);

// (1/2n) [log2 det(S_noise + G S_x G^T) - log2 det(S_noise)] with
// G = H_sd + H_rd H H_sr and S_noise = s2 (H_rd H (H_rd H)^T + I).
// Finite blocks use zero initial conditions, so this differs from the
// stationary rate by O(L/n) edge effects.
double finite_n_rate(const DesignPoint& u, const ChannelTriple& ch, double sigma2, int n);

struct ConvergenceRow {
  int n;
  double finite_rate;
  double gap;  // finite_rate - frequency-domain rate
};

std::vector<ConvergenceRow> convergence_report(const DesignPoint& u, const ChannelTriple& ch,
                                               double sigma2, const std::vector<int>& ns,
                                               const QuadratureGrid& grid);

}  // namespace ltir
