#include "core/quadrature.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace ltir {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi-style initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

QuadratureGrid::QuadratureGrid(int count) {
  gauss_legendre(count, nodes_, weights_);
  for (int i = 0; i < count; ++i) {
    nodes_[i] *= M_PI;
    weights_[i] *= M_PI;
  }
}

double QuadratureGrid::integrate(const std::function<double(double)>& f) const {
  double acc = 0;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    double v = f(nodes_[i]);
    if (!std::isfinite(v)) throw NonFiniteIntegrand("integrate: non-finite integrand value");
    acc += weights_[i] * v;
  }
  return acc / (2.0 * M_PI);
}

}  // namespace ltir
