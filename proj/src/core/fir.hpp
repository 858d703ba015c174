#pragma once

#include <vector>

#include <Eigen/Core>

namespace ltir {

// Real tap vector t_0 + t_1 z^-1 + ... + t_{m-1} z^-(m-1). Used for the source
// filter T(z), the relay filter H(z) and the propagation channels.
struct FirFilter {
  std::vector<double> taps;

  FirFilter() = default;
  explicit FirFilter(std::vector<double> t);
  FirFilter(std::initializer_list<double> t) : FirFilter(std::vector<double>(t)) {}

  static FirFilter zeros(int order);

  int order() const { return static_cast<int>(taps.size()); }
  double energy() const;   // ||t||^2
  double max_abs() const;

  Eigen::VectorXd vec() const;
  static FirFilter from_vec(const Eigen::VectorXd& v);
};

// The three propagation channels, all of common order L.
struct ChannelTriple {
  FirFilter sr;  // source -> relay
  FirFilter rd;  // relay -> destination
  FirFilter sd;  // source -> destination

  ChannelTriple(FirFilter sr_, FirFilter rd_, FirFilter sd_);
  int order() const { return sr.order(); }
  double max_abs() const;
};

struct PowerBudget {
  double ps;      // source power
  double pr;      // relay power
  double sigma2;  // noise variance (same at relay and destination)

  PowerBudget(double ps_, double pr_, double sigma2_);
};

}  // namespace ltir
