#include "core/scalar_opt.hpp"

#include <cmath>
#include <vector>

#include "core/errors.hpp"

namespace ltir::detail {

std::pair<double, double> maximize_scalar(const std::function<double(double)>& f, double lo,
                                          double hi, int coarse, double xtol) {
  if (!(hi >= lo)) throw InvalidArgument("maximize_scalar: empty interval");
  if (hi == lo) return {lo, f(lo)};
  if (coarse < 3) coarse = 3;

  std::vector<double> xs(coarse), fs(coarse);
  int best = 0;
  for (int i = 0; i < coarse; ++i) {
    xs[i] = lo + (hi - lo) * i / (coarse - 1);
    fs[i] = f(xs[i]);
    if (fs[i] > fs[best]) best = i;
  }
  double a = xs[std::max(0, best - 1)];
  double b = xs[std::min(coarse - 1, best + 1)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol * (1.0 + std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  double xm = 0.5 * (a + b);
  double fm = f(xm);
  if (fs[best] > fm) return {xs[best], fs[best]};
  return {xm, fm};
}

}  // namespace ltir::detail
