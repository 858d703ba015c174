#include "core/flatfading.hpp"

#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/scalar_opt.hpp"

namespace ltir {

namespace {
constexpr double kLn2 = 0.69314718055994530942;

double log2_1p(double x) { return std::log1p(x) / kLn2; }

void require_positive_gains(const FlatChannel& fc, const char* who) {
  if (!(fc.a > 0) || !(fc.b > 0))
    throw InvalidArgument(std::string(who) + ": requires a > 0 and b > 0");
}

// Water-filled rate for noise eta(theta) = (b^2 d^2 + 1) s2 / (1 + 2 beta cos
// theta + beta^2) on theta in [0, pi] (theta = delay * omega; the profile is
// even and periodic, so the full-band integral reduces to this interval).
// eta is increasing in theta, so the allocation support is [0, theta*).
double water_filled_rate(double beta, double noise_scale, double ps, const std::vector<double>& gx,
                         const std::vector<double>& gw) {
  beta = std::abs(beta);
  if (beta == 0.0) return 0.5 * log2_1p(ps / noise_scale);

  auto eta = [&](double th) {
    return noise_scale / (1.0 + 2.0 * beta * std::cos(th) + beta * beta);
  };
  auto theta_star = [&](double l) {
    const double c = (noise_scale / l - 1.0 - beta * beta) / (2.0 * beta);
    if (c >= 1.0) return 0.0;
    if (c <= -1.0) return M_PI;
    return std::acos(c);
  };
  // (1/pi) Int_0^{theta*} (l - eta) dtheta, on the mapped Gauss-Legendre rule.
  auto power_at = [&](double l) {
    const double ts = theta_star(l);
    if (ts <= 0) return 0.0;
    double acc = 0;
    for (size_t i = 0; i < gx.size(); ++i) {
      const double th = 0.5 * ts * (gx[i] + 1.0);
      acc += gw[i] * (l - eta(th));
    }
    return acc * 0.5 * ts / M_PI;
  };

  const double eta_min = noise_scale / ((1.0 + beta) * (1.0 + beta));
  double lo = eta_min, hi = eta_min + ps;
  while (power_at(hi) < ps) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (power_at(mid) < ps ? lo : hi) = mid;
  }
  const double l = 0.5 * (lo + hi);

  const double ts = theta_star(l);
  double acc = 0;
  for (size_t i = 0; i < gx.size(); ++i) {
    const double th = 0.5 * ts * (gx[i] + 1.0);
    acc += gw[i] * 0.5 * (std::log2(l) - std::log2(eta(th)));
  }
  return acc * 0.5 * ts / M_PI;
}

struct LpfInner {
  double rate = 0, delta = 0, eta = 0, bound = 0, p_pass = 0;
};

// Fixed-cutoff objective with the inner delta eliminated in closed form:
// the passband rate is increasing in delta up to a/b.
LpfInner lpf_eval(const FlatChannel& fc, const PowerBudget& bu, double wc, double p_pass) {
  const double wp = wc / M_PI, ws = 1.0 - wp;
  LpfInner r;
  r.p_pass = p_pass;
  r.bound = std::sqrt(bu.pr / (fc.a * fc.a * p_pass + wp * bu.sigma2));
  r.delta = std::min(fc.a / fc.b, r.bound);
  const double bd = fc.b * r.delta;
  const double abd = fc.a * bd;
  r.eta = (bd * bd + 1.0) * bu.sigma2 / ((1.0 + abd) * (1.0 + abd));
  double rate = 0;
  if (p_pass > 0) rate += 0.5 * wp * log2_1p(p_pass / (wp * r.eta));
  const double p_stop = bu.ps - p_pass;
  if (ws > 0 && p_stop > 0) rate += 0.5 * ws * log2_1p(p_stop / (ws * bu.sigma2));
  r.rate = rate;
  return r;
}

LpfSolution lpf_solve_fixed(const FlatChannel& fc, const PowerBudget& bu, double wc) {
  auto f = [&](double p) { return lpf_eval(fc, bu, wc, p).rate; };
  auto [p_best, rate_best] = detail::maximize_scalar(f, 0.0, bu.ps, 257);
  LpfInner in = lpf_eval(fc, bu, wc, p_best);

  LpfSolution sol;
  sol.omega_c = wc;
  const double wp = wc / M_PI, ws = 1.0 - wp;

  const double relay_off_rate = 0.5 * log2_1p(bu.ps / bu.sigma2);
  if (in.eta >= bu.sigma2 * (1.0 - 1e-15) || rate_best <= relay_off_rate) {
    // Better not to use the relay: uniform water-filling against sigma2.
    sol.delta = 0;
    sol.eta_pass = bu.sigma2;
    sol.p_pass = wp * bu.ps;
    sol.p_stop = ws * bu.ps;
    sol.level_pass = sol.level_stop = bu.sigma2 + bu.ps;
    sol.lambda = 1.0 / (2.0 * kLn2 * sol.level_stop);
    sol.nu = 0;
    sol.rate_bits = relay_off_rate;
    sol.sol_type = lpf_classify(sol);
    return sol;
  }

  sol.delta = in.delta;
  sol.eta_pass = in.eta;
  sol.p_pass = in.p_pass;
  sol.p_stop = bu.ps - in.p_pass;
  sol.rate_bits = rate_best;

  const double s_pass = sol.p_pass / wp;
  sol.level_pass = s_pass + sol.eta_pass;
  const double kappa1 = 1.0 / (2.0 * kLn2 * sol.level_pass);  // lambda + nu a^2 d^2

  const double a = fc.a, b = fc.b, d = sol.delta;
  const bool relay_binds = in.bound < (a / b) * (1.0 - 1e-12);
  const double tol_p = 1e-8;
  if (sol.p_stop > tol_p) {
    const double s_stop = sol.p_stop / ws;
    sol.level_stop = s_stop + bu.sigma2;
    sol.lambda = 1.0 / (2.0 * kLn2 * sol.level_stop);
    sol.nu = relay_binds && d > 0 ? (kappa1 - sol.lambda) / (a * a * d * d) : 0.0;
  } else if (relay_binds && d > 0) {
    // nu from stationarity in delta on the relay-power boundary.
    const double abd = a * b * d;
    const double deta = bu.sigma2 * 2.0 * b * (b * d - a) / std::pow(1.0 + abd, 3);
    const double drate = (wp / (2.0 * kLn2)) * (-deta) * s_pass /
                         (sol.eta_pass * (sol.eta_pass + s_pass));
    const double dpow = 2.0 * d * (a * a * sol.p_pass + wp * bu.sigma2);
    sol.nu = drate / dpow;
    sol.lambda = kappa1 - sol.nu * a * a * d * d;
    sol.level_stop = sol.lambda > 0 ? 1.0 / (2.0 * kLn2 * sol.lambda) : sol.level_pass;
  } else {
    sol.nu = 0;
    sol.lambda = kappa1;
    sol.level_stop = sol.level_pass;
  }
  sol.nu = std::max(sol.nu, 0.0);
  sol.lambda = std::max(sol.lambda, 0.0);
  sol.sol_type = lpf_classify(sol);
  return sol;
}
}  // namespace

const char* to_string(LpfType t) {
  switch (t) {
    case LpfType::T1_1: return "T1-1";
    case LpfType::T1_2: return "T1-2";
    case LpfType::T2: return "T2";
    case LpfType::T3: return "T3";
  }
  return "?";
}

AfSolution af_optimal(const FlatChannel& fc, const PowerBudget& budget) {
  require_positive_gains(fc, "af_optimal");
  const double dmax = std::sqrt(budget.pr / (fc.a * fc.a * budget.ps + budget.sigma2));
  const double d = std::min(fc.a / fc.b, dmax);
  const double abd = fc.a * fc.b * d;
  const double cnr = (1.0 + abd) * (1.0 + abd) / (fc.b * fc.b * d * d + 1.0);
  return {d, 0.5 * log2_1p(cnr * budget.ps / budget.sigma2)};
}

double one_tap_delayed_rate(const FlatChannel& fc, const PowerBudget& budget, int delay,
                            const QuadratureGrid& grid) {
  if (delay < 1) throw InvalidArgument("one_tap_delayed_rate: delay must be >= 1");
  // Sub-rule for the in-band integrals; the integrands are smooth there.
  const int nsub = std::clamp(grid.size() / 2, 64, 256);
  std::vector<double> gx, gw;
  gauss_legendre(nsub, gx, gw);

  const double dmax = std::sqrt(budget.pr / (fc.a * fc.a * budget.ps + budget.sigma2));
  auto f = [&](double d) {
    const double noise_scale = (fc.b * fc.b * d * d + 1.0) * budget.sigma2;
    return water_filled_rate(fc.a * fc.b * d, noise_scale, budget.ps, gx, gw);
  };
  auto [dstar, rstar] = detail::maximize_scalar(f, 0.0, dmax, 129);
  (void)dstar;
  return rstar;
}

AfSolution equalizing_rate(const FlatChannel& fc, const PowerBudget& budget) {
  const double rate0 = 0.5 * log2_1p(budget.ps / budget.sigma2);
  const double ab = fc.a * fc.b;
  if (std::abs(ab) < 1e-300) return {0.0, rate0};

  const double dmax = std::sqrt(budget.pr / (fc.a * fc.a * budget.ps + budget.sigma2));
  const double dhi = std::min(dmax, 1.0 / std::abs(ab)) * (1.0 - 1e-9);
  auto cnr = [&](double d) {
    const double abd = ab * d;
    return (1.0 - abd * abd) / ((fc.b * fc.b * d * d + 1.0) * budget.sigma2);
  };
  double best = cnr(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double c = cnr(dhi * i / 1000.0);
    if (c > best + 1e-12) throw std::logic_error("equalizing_rate: CNR not maximal at d = 0");
    best = std::max(best, c);
  }
  return {0.0, rate0};
}

LpfSolution lpf_design(const FlatChannel& fc, const PowerBudget& budget, double omega_c) {
  require_positive_gains(fc, "lpf_design");
  if (!(omega_c > 0) || !(omega_c <= M_PI))
    throw InfeasibleBand("lpf_design: omega_c must lie in (0, pi]");
  return lpf_solve_fixed(fc, budget, omega_c);
}

LpfSolution lpf_design_optimized(const FlatChannel& fc, const PowerBudget& budget) {
  require_positive_gains(fc, "lpf_design_optimized");
  auto f = [&](double wc) { return lpf_solve_fixed(fc, budget, wc).rate_bits; };
  auto [wc_best, rate_best] = detail::maximize_scalar(f, M_PI / 256.0, M_PI, 256);
  (void)rate_best;
  return lpf_solve_fixed(fc, budget, wc_best);
}

LpfType lpf_classify(const LpfSolution& sol, double tol) {
  // Relay at full power with delta short of a/b shows up as nu > 0; at
  // delta = a/b the noise-level derivative vanishes and nu = 0.
  const bool binds = sol.nu > tol;
  if (sol.p_stop <= tol) return binds ? LpfType::T1_2 : LpfType::T1_1;
  return binds ? LpfType::T3 : LpfType::T2;
}

}  // namespace ltir
