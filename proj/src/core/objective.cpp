#include "core/objective.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/spectra.hpp"

namespace ltir {

namespace {
constexpr double kInv2Ln2 = 0.72134752044448170368;  // 1/(2 ln 2)
constexpr double kInvLn2 = 1.4426950408889634074;    // 1/ln 2

inline std::complex<double> dot_taps(const std::complex<double>* e, const double* c, int n) {
  double re = 0, im = 0;
  for (int k = 0; k < n; ++k) {
    re += c[k] * e[k].real();
    im += c[k] * e[k].imag();
  }
  return {re, im};
}
}  // namespace

Eigen::VectorXd DesignPoint::stacked() const {
  Eigen::VectorXd u(t.order() + h.order());
  u.head(t.order()) = t.vec();
  u.tail(h.order()) = h.vec();
  return u;
}

DesignPoint DesignPoint::from_stacked(const Eigen::VectorXd& u, int ls, int lr) {
  if (u.size() != ls + lr) throw InvalidArgument("DesignPoint: stacked size mismatch");
  return {FirFilter::from_vec(u.head(ls)), FirFilter::from_vec(u.tail(lr))};
}

Evaluator::Evaluator(const ChannelTriple& ch, const QuadratureGrid& grid, double sigma2,
                     int ls, int lr)
    : ls_(ls), lr_(lr), kmax_(std::max(ls, lr)), sigma2_(sigma2) {
  if (ls < 1 || lr < 1) throw InvalidArgument("Evaluator: filter orders must be >= 1");
  if (!(sigma2 > 0)) throw InvalidArgument("Evaluator: sigma2 must be > 0");
  const int n = grid.size();
  wscaled_.resize(n);
  expm_.resize(static_cast<size_t>(n) * kmax_);
  hsd_.resize(n);
  e_.resize(n);
  abs_hrd2_.resize(n);
  abs_hsr2_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double w = grid.nodes()[i];
    wscaled_[i] = grid.weights()[i] / (2.0 * M_PI);
    const std::complex<double> zinv(std::cos(w), -std::sin(w));
    std::complex<double> p(1.0, 0.0);
    for (int k = 0; k < kmax_; ++k) {
      expm_[static_cast<size_t>(i) * kmax_ + k] = p;
      p *= zinv;
    }
    const std::complex<double> hsr = freq_response(ch.sr, w);
    const std::complex<double> hrd = freq_response(ch.rd, w);
    hsd_[i] = freq_response(ch.sd, w);
    e_[i] = hsr * hrd;
    abs_hrd2_[i] = std::norm(hrd);
    abs_hsr2_[i] = std::norm(hsr);
  }
}

double Evaluator::rate(const Eigen::VectorXd& t, const Eigen::VectorXd& h) const {
  if (t.size() != ls_ || h.size() != lr_) throw InvalidArgument("rate: tap size mismatch");
  const int n = static_cast<int>(wscaled_.size());
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    const std::complex<double>* e = &expm_[static_cast<size_t>(i) * kmax_];
    const std::complex<double> T = dot_taps(e, t.data(), ls_);
    const std::complex<double> H = dot_taps(e, h.data(), lr_);
    const std::complex<double> S = hsd_[i] + e_[i] * H;
    const double den = sigma2_ * (abs_hrd2_[i] * std::norm(H) + 1.0);
    const double a = (std::norm(S) / den) * std::norm(T);
    if (!std::isfinite(a)) throw NonFiniteIntegrand("rate: non-finite integrand");
    acc += wscaled_[i] * 0.5 * kInvLn2 * std::log1p(a);
  }
  return acc;
}

double Evaluator::rate_and_cost_gradient(const Eigen::VectorXd& t, const Eigen::VectorXd& h,
                                         Eigen::VectorXd& grad) const {
  if (t.size() != ls_ || h.size() != lr_)
    throw InvalidArgument("rate_and_cost_gradient: tap size mismatch");
  const int n = static_cast<int>(wscaled_.size());
  grad.setZero(ls_ + lr_);
  double* gt = grad.data();
  double* gh = grad.data() + ls_;
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    const std::complex<double>* e = &expm_[static_cast<size_t>(i) * kmax_];
    const std::complex<double> T = dot_taps(e, t.data(), ls_);
    const std::complex<double> H = dot_taps(e, h.data(), lr_);
    const std::complex<double> S = hsd_[i] + e_[i] * H;
    const double num = std::norm(S);
    const double den = sigma2_ * (abs_hrd2_[i] * std::norm(H) + 1.0);
    const double cnr = num / den;
    const double abs_t2 = std::norm(T);
    const double a = cnr * abs_t2;
    if (!std::isfinite(a)) throw NonFiniteIntegrand("cost gradient: non-finite integrand");
    acc += wscaled_[i] * 0.5 * kInvLn2 * std::log1p(a);

    const double fac = wscaled_[i] * kInv2Ln2 / (1.0 + a);
    // phi = -rate, so both blocks accumulate with a negative sign.
    // t-block: B_k = CNR * 2 Re(e^{jwk} T)
    const std::complex<double> zt = (2.0 * fac * cnr) * T;
    for (int k = 0; k < ls_; ++k)
      gt[k] -= zt.real() * e[k].real() + zt.imag() * e[k].imag();
    // h-block: C1 (C2_k - C4*C3_k) = 2 (|T|^2/D) Re((conj(S)E - CNR s2 |Hrd|^2 conj(H)) e^{-jwk})
    const std::complex<double> zh = (2.0 * fac * abs_t2 / den) *
        (std::conj(S) * e_[i] - cnr * sigma2_ * abs_hrd2_[i] * std::conj(H));
    for (int k = 0; k < lr_; ++k)
      gh[k] -= zh.real() * e[k].real() - zh.imag() * e[k].imag();
  }
  return acc;
}

Eigen::MatrixXd Evaluator::relay_gram(const Eigen::VectorXd& t) const {
  if (t.size() != ls_) throw InvalidArgument("relay_gram: tap size mismatch");
  const int n = static_cast<int>(wscaled_.size());
  // Re(w w^H)_{ij} = cos((i-j) w): the Gram is symmetric Toeplitz, so only the
  // first column is accumulated. cos(k w) = Re(e^{-jwk}).
  Eigen::VectorXd col = Eigen::VectorXd::Zero(lr_);
  for (int i = 0; i < n; ++i) {
    const std::complex<double>* e = &expm_[static_cast<size_t>(i) * kmax_];
    const std::complex<double> T = dot_taps(e, t.data(), ls_);
    const double g = abs_hsr2_[i] * std::norm(T) + sigma2_;
    if (!std::isfinite(g)) throw NonFiniteIntegrand("relay_gram: non-finite integrand");
    const double wg = wscaled_[i] * g;
    for (int k = 0; k < lr_; ++k) col[k] += wg * e[k].real();
  }
  Eigen::MatrixXd q(lr_, lr_);
  for (int i = 0; i < lr_; ++i)
    for (int j = 0; j < lr_; ++j) q(i, j) = col[std::abs(i - j)];
  return q;
}

double rate(const DesignPoint& u, const ChannelTriple& ch, const QuadratureGrid& grid,
            double sigma2) {
  Evaluator ev(ch, grid, sigma2, u.t.order(), u.h.order());
  return ev.rate(u.t.vec(), u.h.vec());
}

Eigen::VectorXd cost_gradient(const DesignPoint& u, const ChannelTriple& ch,
                              const QuadratureGrid& grid, double sigma2) {
  Evaluator ev(ch, grid, sigma2, u.t.order(), u.h.order());
  Eigen::VectorXd grad;
  ev.rate_and_cost_gradient(u.t.vec(), u.h.vec(), grad);
  return grad;
}

Eigen::VectorXd finite_diff_gradient(const DesignPoint& u, const ChannelTriple& ch,
                                     const QuadratureGrid& grid, double sigma2, double step) {
  if (!(step > 0)) throw InvalidArgument("finite_diff_gradient: step must be > 0");
  const int ls = u.t.order(), lr = u.h.order();
  Evaluator ev(ch, grid, sigma2, ls, lr);
  auto phi = [&](const Eigen::VectorXd& x) {
    return -ev.rate(x.head(ls), x.tail(lr));
  };
  return central_gradient(phi, u.stacked(), step);
}

Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double step) {
  if (!(step > 0)) throw InvalidArgument("central_gradient: step must be > 0");
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + step;
    const double fp = f(xp);
    xp[i] = xi - step;
    const double fm = f(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

}  // namespace ltir
