#include "core/optimizer.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "core/errors.hpp"
#include "core/scalar_opt.hpp"

namespace ltir {

namespace {
constexpr double kDegenerateTapThreshold = 1e-15;
constexpr double kTinyGradient = 1e-15;

// Projection of h onto {x : x^T q x <= pr}, keeping x_0 pinned to zero in the
// strictly causal case (the constraint restricted to that subspace uses the
// Gram with the first row/column removed).
Eigen::VectorXd project_relay(const Eigen::VectorXd& h, const Eigen::MatrixXd& q, double pr,
                              bool strict) {
  if (!strict) return project_ellipsoid(h, RelayEllipsoid{q, pr});
  const Eigen::Index m = h.size() - 1;
  RelayEllipsoid red{q.bottomRightCorner(m, m), pr};
  Eigen::VectorXd out = Eigen::VectorXd::Zero(h.size());
  out.tail(m) = project_ellipsoid(h.tail(m), red);
  return out;
}
}  // namespace

double step_scale(int n, double mu0, bool sqrt_decay) {
  if (n < 1) throw InvalidArgument("step_scale: n must be >= 1");
  return sqrt_decay ? mu0 / std::sqrt(static_cast<double>(n)) : mu0;
}

double step_length(StepMode mode, int n, double phi_n, double grad_norm, double level,
                   double mu0, bool sqrt_decay) {
  if (!(grad_norm > 0)) throw InvalidArgument("step_length: grad_norm must be > 0");
  const double mu = step_scale(n, mu0, sqrt_decay);
  switch (mode) {
    case StepMode::polyak_level:
      return mu * std::max(phi_n - level, 0.0) / (grad_norm * grad_norm);
    case StepMode::normalized:
      return mu / grad_norm;
  }
  throw InvalidArgument("step_length: unknown mode");
}

DesignOutcome design(const ChannelTriple& ch, const PowerBudget& budget, int ls, int lr,
                     const OptimizerConfig& cfg, const QuadratureGrid& grid) {
  const bool strict = cfg.strictly_causal;
  const int min_order = strict ? 2 : 1;
  if (ls < min_order || lr < min_order)
    throw InvalidArgument("design: filter orders too small for the causality mode");
  if (cfg.max_iters < 1) throw InvalidArgument("design: max_iters must be >= 1");
  if (!(cfg.rel_tol > 0)) throw InvalidArgument("design: rel_tol must be > 0");
  if (!(cfg.mu0 > 0)) throw InvalidArgument("design: mu0 must be > 0");
  if (cfg.step_mode == StepMode::polyak_level && !(cfg.mu0 < 2.0))
    throw InvalidArgument("design: polyak_level needs mu_n in (0, 2)");
  if (ch.max_abs() < kDegenerateTapThreshold)
    throw DegenerateChannel("design: all channels are zero");

  Evaluator ev(ch, grid, budget.sigma2, ls, lr);
  const int i0 = strict ? 1 : 0;

  // Reference-path ellipsoids are fixed across iterations (they sample the
  // ball surface, not the current t).
  std::vector<RelayEllipsoid> xi_ells;
  if (cfg.algorithm == Algorithm::xi_reference) {
    const int m = cfg.xi_samples > 0 ? cfg.xi_samples : 2 * ls * ls;
    for (const auto& ts : ball_surface_points(ls, std::sqrt(budget.ps), m))
      xi_ells.push_back({ev.relay_gram(ts), budget.pr});
  }

  Eigen::VectorXd t = Eigen::VectorXd::Zero(ls);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(lr);
  switch (cfg.init) {
    case InitMode::full_power_relay: {
      t[i0] = std::sqrt(budget.ps);
      Eigen::VectorXd ones = Eigen::VectorXd::Ones(lr);
      if (strict) ones[0] = 0;
      h = project_relay(ones, ev.relay_gram(t), budget.pr, strict);
      break;
    }
    case InitMode::flat_source: {
      const int nfree = ls - i0;
      t.segment(i0, nfree).setConstant(std::sqrt(budget.ps / nfree));
      break;
    }
    case InitMode::af_point: {
      t[i0] = std::sqrt(budget.ps);
      const AfBaseline af = af_baseline(ch, budget, grid);
      h[std::min(i0, lr - 1)] = af.gain;
      h = project_relay(h, ev.relay_gram(t), budget.pr, strict);
      break;
    }
  }

  Eigen::MatrixXd q_cur = ev.relay_gram(t);
  OptimizerTrace trace;
  trace.reserve(cfg.max_iters);

  double best_rate = -1.0;
  Eigen::VectorXd best_t = t, best_h = h;
  double best_src = 0, best_rel = 0;
  double level_slack = cfg.level_slack;
  bool converged = false;

  Eigen::VectorXd grad(ls + lr);
  for (int n = 1; n <= cfg.max_iters; ++n) {
    const double rate_n = ev.rate_and_cost_gradient(t, h, grad);
    if (strict) {
      grad[0] = 0;
      grad[ls] = 0;
    }
    const double src_pow = t.squaredNorm();
    const double rel_pow = h.dot(q_cur * h);
    trace.push_back({rate_n, grad.norm(), src_pow, rel_pow, 0.0});

    if (rate_n > best_rate) {
      best_rate = rate_n;
      best_t = t;
      best_h = h;
      best_src = src_pow;
      best_rel = rel_pow;
    }
    const double phi_n = -rate_n;
    if (n == 1 && level_slack <= 0) level_slack = 0.1 * std::abs(phi_n);

    const double gnorm = grad.norm();
    if (gnorm < kTinyGradient) {  // stationary point: the update cannot move
      converged = true;
      break;
    }
    const double level = (-best_rate) - level_slack;
    const double s =
        step_length(cfg.step_mode, n, phi_n, gnorm, level, cfg.mu0, cfg.sqrt_decay);
    trace.back().step = s;

    Eigen::VectorXd tn = t - s * grad.head(ls);
    Eigen::VectorXd hn = h - s * grad.tail(lr);
    tn = project_ball(tn, budget.ps);
    auto relay_power_of = [&](const Eigen::VectorXd& v, const Eigen::MatrixXd& q) {
      if (!strict) return v.dot(q * v);
      const Eigen::Index m = v.size() - 1;
      return v.tail(m).dot(q.bottomRightCorner(m, m) * v.tail(m));
    };
    if (cfg.algorithm == Algorithm::two_step) {
      q_cur = ev.relay_gram(tn);
      hn = project_relay(hn, q_cur, budget.pr, strict);
    } else {
      for (int sweep = 0; sweep < cfg.xi_sweeps; ++sweep) {
        bool all_in = true;
        for (const auto& e : xi_ells) {
          if (relay_power_of(hn, e.q) > e.bound * (1 + kFeasSlack)) {
            hn = project_relay(hn, e.q, e.bound, strict);
            all_in = false;
          }
        }
        if (all_in) break;
      }
      // End on the ellipsoid of the surface point aligned with tn:
      // xi(t_s) is contained in xi(tn), so the iterate stays feasible.
      const double tn_norm = tn.norm();
      if (tn_norm > 0) {
        const Eigen::VectorXd ts = tn * (std::sqrt(budget.ps) / tn_norm);
        hn = project_relay(hn, ev.relay_gram(ts), budget.pr, strict);
      }
      q_cur = ev.relay_gram(tn);
    }

    const double un2 = t.squaredNorm() + h.squaredNorm();
    const double disp2 = (tn - t).squaredNorm() + (hn - h).squaredNorm();
    t = tn;
    h = hn;
    if (un2 > 0 && disp2 / un2 <= cfg.rel_tol) {
      converged = true;
      break;
    }
  }

  DesignOutcome out;
  out.point = {FirFilter::from_vec(best_t), FirFilter::from_vec(best_h)};
  out.report.rate_bits = best_rate;
  out.report.source_power_used = best_src;
  out.report.relay_power_used = best_rel;
  out.report.converged = converged;
  out.report.iterations = static_cast<int>(trace.size());
  out.trace = std::move(trace);
  return out;
}

AfBaseline af_baseline(const ChannelTriple& ch, const PowerBudget& budget,
                       const QuadratureGrid& grid) {
  Evaluator ev(ch, grid, budget.sigma2, 1, 1);
  Eigen::VectorXd t(1);
  t[0] = std::sqrt(budget.ps);
  const double q00 = ev.relay_gram(t)(0, 0);
  const double dmax = std::sqrt(budget.pr / q00);
  Eigen::VectorXd hd(1);
  auto f = [&](double d) {
    hd[0] = d;
    return ev.rate(t, hd);
  };
  // The gain is signed: with sign-indefinite channel taps the coherent
  // combining may need d < 0.
  auto [dstar, rstar] = detail::maximize_scalar(f, -dmax, dmax, 257);

  AfBaseline out;
  out.gain = dstar;
  out.report.rate_bits = rstar;
  out.report.source_power_used = budget.ps;
  out.report.relay_power_used = dstar * dstar * q00;
  out.report.converged = true;
  out.report.iterations = 0;
  return out;
}

}  // namespace ltir
