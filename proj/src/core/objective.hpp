#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "core/fir.hpp"
#include "core/quadrature.hpp"

namespace ltir {

// Joint design variable u = [t; h] (stacked order matters for the gradient).
struct DesignPoint {
  FirFilter t;
  FirFilter h;

  Eigen::VectorXd stacked() const;
  static DesignPoint from_stacked(const Eigen::VectorXd& u, int ls, int lr);
};

struct RateReport {
  double rate_bits = 0.0;
  double source_power_used = 0.0;
  double relay_power_used = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Caches channel frequency responses and the e^{-jwk} tables on the grid so
// that the optimizer can evaluate the cost, its gradient and the relay Gram
// matrix many times against one (channel, grid, sigma2, orders) tuple.
//
// Sums run in fixed node order; evaluations are bit-reproducible.
class Evaluator {
public:
  Evaluator(const ChannelTriple& ch, const QuadratureGrid& grid, double sigma2, int ls, int lr);

  // (1/2pi) Int 1/2 log2(1 + CNR(w) |T(w)|^2) dw
  double rate(const Eigen::VectorXd& t, const Eigen::VectorXd& h) const;

  // Returns the rate and fills grad with the gradient of phi = -rate
  // (descent on phi increases the rate). grad has length ls + lr, [t; h].
  double rate_and_cost_gradient(const Eigen::VectorXd& t, const Eigen::VectorXd& h,
                                Eigen::VectorXd& grad) const;

  // q(t) = (1/2pi) Int (|H_sr|^2 |T|^2 + sigma2) Re(w w^H) dw, symmetric
  // Toeplitz, lr x lr. Relay power of h is h^T q h.
  Eigen::MatrixXd relay_gram(const Eigen::VectorXd& t) const;

  int ls() const { return ls_; }
  int lr() const { return lr_; }
  double sigma2() const { return sigma2_; }
  int grid_size() const { return static_cast<int>(wscaled_.size()); }

private:
  int ls_, lr_, kmax_;
  double sigma2_;
  std::vector<double> wscaled_;                  // weight / 2pi
  std::vector<std::complex<double>> expm_;       // [node][k] e^{-jwk}, node-major
  std::vector<std::complex<double>> hsd_, e_;    // H_sd, H_sr*H_rd per node
  std::vector<double> abs_hrd2_, abs_hsr2_;
};

double rate(const DesignPoint& u, const ChannelTriple& ch, const QuadratureGrid& grid,
            double sigma2);

// Gradient of phi(u) = -rate(u), analytic. Layout [t-block; h-block].
Eigen::VectorXd cost_gradient(const DesignPoint& u, const ChannelTriple& ch,
                              const QuadratureGrid& grid, double sigma2);

// Central differences of phi, per coordinate. Validation oracle.
Eigen::VectorXd finite_diff_gradient(const DesignPoint& u, const ChannelTriple& ch,
                                     const QuadratureGrid& grid, double sigma2,
                                     double step = 1e-6);

// Central-difference gradient of an arbitrary functional.
Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double step);

}  // namespace ltir
