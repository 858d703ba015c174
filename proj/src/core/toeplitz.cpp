#include "core/toeplitz.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "core/errors.hpp"
#include "core/spectra.hpp"

namespace ltir {

namespace {
constexpr int kMaxBlock = 4096;  // O(n^3) guard

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Eigen::MatrixXd lower_toeplitz(const std::vector<double>& col, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const int len = std::min<int>(static_cast<int>(col.size()), n);
  for (int k = 0; k < len; ++k)
    for (int i = k; i < n; ++i) m(i, i - k) = col[k];
  return m;
}

double log2_det_cholesky(Eigen::MatrixXd m, const char* who) {
  if (!m.allFinite())
    throw NumericalRankLoss(std::string(who) + ": covariance overflowed (tap overflow?)");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym >= 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
    throw NumericalRankLoss(std::string(who) + ": matrix asymmetry beyond tolerance");
  m = 0.5 * (m + m.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericalRankLoss(std::string(who) + ": Cholesky failed (tap overflow?)");
  double acc = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::log2(llt.matrixL()(i, i));
  if (!std::isfinite(acc))
    throw NumericalRankLoss(std::string(who) + ": non-finite log-determinant");
  return 2.0 * acc;
}
}  // namespace

FiniteBlockModel build_finite_block_model(const DesignPoint& u, const ChannelTriple& ch, int n) {
  if (n < 1 || n > kMaxBlock)
    throw InvalidArgument("build_finite_block_model: n must lie in [1, 4096]");
  FiniteBlockModel m;
  m.n = n;
  m.sigma_x.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.sigma_x(i, j) = source_autocorrelation(u.t, i - j);
  m.relay = lower_toeplitz(u.h.taps, n);
  m.sr = lower_toeplitz(ch.sr.taps, n);
  m.rd = lower_toeplitz(ch.rd.taps, n);
  m.sd = lower_toeplitz(ch.sd.taps, n);
  return m;
}

double finite_n_rate(const DesignPoint& u, const ChannelTriple& ch, double sigma2, int n) {
  if (n < 1 || n > kMaxBlock) throw InvalidArgument("finite_n_rate: n must lie in [1, 4096]");
  if (!(sigma2 > 0)) throw InvalidArgument("finite_n_rate: sigma2 must be > 0");
  // Lower-triangular Toeplitz matrices are polynomials in the shift matrix:
  // products reduce to (truncated) tap convolutions.
  const std::vector<double> relay_path = convolve(ch.rd.taps, u.h.taps);
  std::vector<double> overall = convolve(relay_path, ch.sr.taps);
  if (overall.size() < ch.sd.taps.size()) overall.resize(ch.sd.taps.size(), 0.0);
  for (size_t i = 0; i < ch.sd.taps.size(); ++i) overall[i] += ch.sd.taps[i];

  const Eigen::MatrixXd g = lower_toeplitz(overall, n);
  const Eigen::MatrixXd mrel = lower_toeplitz(relay_path, n);

  Eigen::MatrixXd sigma_x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sigma_x(i, j) = source_autocorrelation(u.t, i - j);

  Eigen::MatrixXd noise = sigma2 * (mrel * mrel.transpose());
  noise.diagonal().array() += sigma2;
  const Eigen::MatrixXd signal = g * sigma_x * g.transpose();

  const double ld_noise = log2_det_cholesky(noise, "finite_n_rate");
  const double ld_total = log2_det_cholesky(noise + signal, "finite_n_rate");
  return (ld_total - ld_noise) / (2.0 * n);
}

std::vector<ConvergenceRow> convergence_report(const DesignPoint& u, const ChannelTriple& ch,
                                               double sigma2, const std::vector<int>& ns,
                                               const QuadratureGrid& grid) {
  if (ns.empty()) throw InvalidArgument("convergence_report: ns must be nonempty");
  for (size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw InvalidArgument("convergence_report: ns must be ascending");
  const double limit = rate(u, ch, grid, sigma2);
  std::vector<ConvergenceRow> rows;
  rows.reserve(ns.size());
  for (int n : ns) {
    const double fr = finite_n_rate(u, ch, sigma2, n);
    rows.push_back({n, fr, fr - limit});
  }
  return rows;
}

}  // namespace ltir
