#include "core/spectra.hpp"

#include <cmath>
#include <cstdlib>

namespace ltir {

std::complex<double> freq_response(const FirFilter& f, double omega) {
  // Horner in z^{-1} = e^{-jw}: fewer trig calls than a per-tap exp.
  const std::complex<double> zinv(std::cos(omega), -std::sin(omega));
  std::complex<double> acc(0.0, 0.0);
  for (int k = f.order() - 1; k >= 0; --k) acc = acc * zinv + f.taps[k];
  return acc;
}

CnrParts cnr_parts(const ChannelTriple& ch, const FirFilter& h, double sigma2, double omega) {
  const std::complex<double> hsr = freq_response(ch.sr, omega);
  const std::complex<double> hrd = freq_response(ch.rd, omega);
  const std::complex<double> hsd = freq_response(ch.sd, omega);
  const std::complex<double> hh = freq_response(h, omega);
  const double num = std::norm(hsd + hsr * hh * hrd);
  const double den = sigma2 * (std::norm(hrd * hh) + 1.0);
  return {num, den};
}

double cnr_density(const ChannelTriple& ch, const FirFilter& h, double sigma2, double omega) {
  return cnr_parts(ch, h, sigma2, omega).value();
}

double source_autocorrelation(const FirFilter& t, int lag) {
  const int m = t.order();
  const int k = std::abs(lag);
  if (k >= m) return 0.0;
  double acc = 0;
  for (int n = k; n < m; ++n) acc += t.taps[n] * t.taps[n - k];
  return acc;
}

}  // namespace ltir
