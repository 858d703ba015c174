#include "core/projections.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "core/errors.hpp"

namespace ltir {

RelayEllipsoid relay_form(const FirFilter& t, int lr, const ChannelTriple& ch,
                          const QuadratureGrid& grid, double sigma2, double pr) {
  if (!(pr > 0)) throw InvalidArgument("relay_form: pr must be > 0");
  Evaluator ev(ch, grid, sigma2, t.order(), lr);
  return {ev.relay_gram(t.vec()), pr};
}

Eigen::VectorXd project_ball(const Eigen::VectorXd& t, double ps) {
  if (!(ps > 0)) throw InvalidArgument("project_ball: ps must be > 0");
  const double n2 = t.squaredNorm();
  if (n2 <= ps) return t;
  return t * std::sqrt(ps / n2);
}

Eigen::VectorXd project_ellipsoid(const Eigen::VectorXd& h, const RelayEllipsoid& e,
                                  double tol) {
  if (!(tol > 0)) throw InvalidArgument("project_ellipsoid: tol must be > 0");
  const Eigen::Index n = h.size();
  if (e.q.rows() != n || e.q.cols() != n)
    throw InvalidArgument("project_ellipsoid: dimension mismatch");
  if ((e.q - e.q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + e.q.cwiseAbs().maxCoeff()))
    throw SingularForm("project_ellipsoid: q is not symmetric");

  if (e.contains(h)) return h;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.q);
  if (es.info() != Eigen::Success)
    throw SingularForm("project_ellipsoid: eigendecomposition failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  if (lam.minCoeff() <= 0)
    throw SingularForm("project_ellipsoid: q is not positive definite");

  const Eigen::VectorXd z = es.eigenvectors().transpose() * h;
  // c(mu) = sum lam_i z_i^2 / (1 + mu lam_i)^2 is convex decreasing; Newton
  // from the left never overshoots the root, bisection safeguards it anyway.
  auto constraint = [&](double mu, double& c, double& dc) {
    c = 0;
    dc = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = 1.0 + mu * lam[i];
      const double v = lam[i] * z[i] * z[i] / (d * d);
      c += v;
      dc -= 2.0 * v * lam[i] / d;
    }
  };

  double lo = 0.0, hi = 1.0, c, dc;
  constraint(hi, c, dc);
  while (c > e.bound) {
    lo = hi;
    hi *= 4.0;
    constraint(hi, c, dc);
    if (hi > 1e30) throw SingularForm("project_ellipsoid: dual root not bracketed");
  }
  double mu = lo;
  for (int it = 0; it < 200; ++it) {
    constraint(mu, c, dc);
    const double resid = c - e.bound;
    if (std::abs(resid) <= tol * e.bound) break;
    if (resid > 0)
      lo = mu;
    else
      hi = mu;
    double next = (dc != 0) ? mu - resid / dc : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    mu = next;
  }
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = z[i] / (1.0 + mu * lam[i]);
  return es.eigenvectors() * y;
}

DesignPoint project_two_step(const DesignPoint& u, const ChannelTriple& ch,
                             const QuadratureGrid& grid, double sigma2,
                             const PowerBudget& budget) {
  const Eigen::VectorXd tp = project_ball(u.t.vec(), budget.ps);
  Evaluator ev(ch, grid, sigma2, u.t.order(), u.h.order());
  RelayEllipsoid e{ev.relay_gram(tp), budget.pr};
  const Eigen::VectorXd hp = project_ellipsoid(u.h.vec(), e);
  return {FirFilter::from_vec(tp), FirFilter::from_vec(hp)};
}

std::vector<Eigen::VectorXd> ball_surface_points(int dim, double radius, int m) {
  if (dim < 1 || m < 1) throw InvalidArgument("ball_surface_points: dim, m must be >= 1");
  std::vector<Eigen::VectorXd> pts;
  if (dim == 1) {
    pts.push_back(Eigen::VectorXd::Constant(1, radius));
    return pts;
  }
  if (dim == 2) {
    // Half circle; the antipode generates the same ellipsoid.
    for (int i = 0; i < m; ++i) {
      const double th = M_PI * (i + 0.5) / m;
      Eigen::VectorXd p(2);
      p << radius * std::cos(th), radius * std::sin(th);
      pts.push_back(p);
    }
    return pts;
  }
  if (dim == 3) {
    // Fibonacci hemisphere.
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < m; ++i) {
      const double z = (i + 0.5) / m;  // (0, 1]: upper hemisphere
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double th = golden * i;
      Eigen::VectorXd p(3);
      p << radius * r * std::cos(th), radius * r * std::sin(th), radius * z;
      pts.push_back(p);
    }
    return pts;
  }
  std::mt19937_64 rng(0xb0a710c5u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd p(dim);
    double n2 = 0;
    do {
      for (int k = 0; k < dim; ++k) p[k] = gauss(rng);
      n2 = p.squaredNorm();
    } while (n2 < 1e-12);
    p *= radius / std::sqrt(n2);
    for (int k = 0; k < dim; ++k) {  // canonical sign: first nonzero positive
      if (p[k] != 0) {
        if (p[k] < 0) p = -p;
        break;
      }
    }
    pts.push_back(p);
  }
  return pts;
}

Eigen::VectorXd project_xi(const Eigen::VectorXd& h, int ls, const ChannelTriple& ch,
                           const QuadratureGrid& grid, double sigma2,
                           const PowerBudget& budget, int m, int sweeps) {
  if (sweeps < 1) throw InvalidArgument("project_xi: sweeps must be >= 1");
  if (m <= 0) m = 2 * ls * ls;
  Evaluator ev(ch, grid, sigma2, ls, static_cast<int>(h.size()));
  std::vector<RelayEllipsoid> ells;
  for (const auto& t : ball_surface_points(ls, std::sqrt(budget.ps), m))
    ells.push_back({ev.relay_gram(t), budget.pr});

  Eigen::VectorXd x = h;
  for (int s = 0; s < sweeps; ++s) {
    bool all_in = true;
    for (const auto& e : ells) {
      if (!e.contains(x)) {
        x = project_ellipsoid(x, e);
        all_in = false;
      }
    }
    if (all_in) break;
  }
  return x;
}

}  // namespace ltir
