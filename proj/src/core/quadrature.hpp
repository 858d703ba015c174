#pragma once

#include <functional>
#include <vector>

namespace ltir {

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Gauss-Legendre grid mapped to [-pi, pi]. Weights sum to 2*pi, so
// integrate(f) realizes (1/2pi) * integral of f over [-pi, pi].
class QuadratureGrid {
public:
  explicit QuadratureGrid(int count = 512);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  // Throws NonFiniteIntegrand if f(node) is NaN/Inf anywhere.
  double integrate(const std::function<double(double)>& f) const;

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace ltir
