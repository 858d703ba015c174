#include "core/fir.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace ltir {

FirFilter::FirFilter(std::vector<double> t) : taps(std::move(t)) {
  if (taps.empty()) throw InvalidArgument("FirFilter: needs at least one tap");
  for (double v : taps) {
    if (!std::isfinite(v)) throw InvalidArgument("FirFilter: non-finite tap");
  }
}

FirFilter FirFilter::zeros(int order) {
  if (order < 1) throw InvalidArgument("FirFilter: order must be >= 1");
  return FirFilter(std::vector<double>(order, 0.0));
}

double FirFilter::energy() const {
  double e = 0;
  for (double v : taps) e += v * v;
  return e;
}

double FirFilter::max_abs() const {
  double m = 0;
  for (double v : taps) m = std::max(m, std::abs(v));
  return m;
}

Eigen::VectorXd FirFilter::vec() const {
  return Eigen::Map<const Eigen::VectorXd>(taps.data(), taps.size());
}

FirFilter FirFilter::from_vec(const Eigen::VectorXd& v) {
  return FirFilter(std::vector<double>(v.data(), v.data() + v.size()));
}

ChannelTriple::ChannelTriple(FirFilter sr_, FirFilter rd_, FirFilter sd_)
    : sr(std::move(sr_)), rd(std::move(rd_)), sd(std::move(sd_)) {
  if (sr.order() != rd.order() || sr.order() != sd.order())
    throw InvalidArgument("ChannelTriple: channel orders differ");
}

double ChannelTriple::max_abs() const {
  return std::max({sr.max_abs(), rd.max_abs(), sd.max_abs()});
}

PowerBudget::PowerBudget(double ps_, double pr_, double sigma2_)
    : ps(ps_), pr(pr_), sigma2(sigma2_) {
  if (!(ps > 0) || !(pr > 0) || !(sigma2 > 0))
    throw InvalidArgument("PowerBudget: ps, pr, sigma2 must be > 0");
}

}  // namespace ltir
