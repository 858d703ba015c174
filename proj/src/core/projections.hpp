#pragma once

#include <vector>

#include <Eigen/Core>

#include "core/fir.hpp"
#include "core/objective.hpp"
#include "core/quadrature.hpp"

namespace ltir {

// Constraint violations up to this fraction of the bound count as feasible
// (root-finder termination noise).
inline constexpr double kFeasSlack = 1e-9;

// {x : x^T q x <= bound}, q symmetric positive definite.
struct RelayEllipsoid {
  Eigen::MatrixXd q;
  double bound;

  double power(const Eigen::VectorXd& h) const { return h.dot(q * h); }
  bool contains(const Eigen::VectorXd& h, double slack = kFeasSlack) const {
    return power(h) <= bound * (1.0 + slack);
  }
};

// The h-ellipsoid xi_h(t) induced by the relay power constraint for a given t.
// lr is the relay filter order (the Gram dimension).
RelayEllipsoid relay_form(const FirFilter& t, int lr, const ChannelTriple& ch,
                          const QuadratureGrid& grid, double sigma2, double pr);

// Euclidean projection onto {t : ||t||^2 <= ps}.
Eigen::VectorXd project_ball(const Eigen::VectorXd& t, double ps);

// Euclidean projection onto the ellipsoid. Solves x(mu) = (I + mu q)^{-1} h
// with mu >= 0 the root of x(mu)^T q x(mu) = bound (safeguarded Newton).
// Throws SingularForm if q fails the positive-definiteness check.
Eigen::VectorXd project_ellipsoid(const Eigen::VectorXd& h, const RelayEllipsoid& e,
                                  double tol = 1e-12);

// Algorithm 2's composite: t onto the ball, then h onto the ellipsoid induced
// by the projected t. Output lies in K (both power constraints hold).
DesignPoint project_two_step(const DesignPoint& u, const ChannelTriple& ch,
                             const QuadratureGrid& grid, double sigma2,
                             const PowerBudget& budget);

// Approximate projection onto Xi_h = intersection of xi_h(t) over the ball
// surface, by cyclic projection over m sampled ellipsoids (reference path for
// small ls only; m <= 0 selects the 2*ls^2 default).
Eigen::VectorXd project_xi(const Eigen::VectorXd& h, int ls, const ChannelTriple& ch,
                           const QuadratureGrid& grid, double sigma2,
                           const PowerBudget& budget, int m, int sweeps);

// Deterministic quasi-uniform sample of the radius-r sphere surface in R^dim.
// Antipodal duplicates are dropped (xi_h(t) = xi_h(-t)).
std::vector<Eigen::VectorXd> ball_surface_points(int dim, double radius, int m);

}  // namespace ltir
