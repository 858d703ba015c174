#pragma once

#include <complex>

#include "core/fir.hpp"

namespace ltir {

// T(e^{jw}) = sum_k taps[k] e^{-jwk}
std::complex<double> freq_response(const FirFilter& f, double omega);

// Channel-to-noise power ratio density split into numerator and denominator:
// N = |H_sd + H_sr H H_rd|^2, D = sigma2 (|H_rd H|^2 + 1). D >= sigma2 always.
struct CnrParts {
  double num;
  double den;
  double value() const { return num / den; }
};

CnrParts cnr_parts(const ChannelTriple& ch, const FirFilter& h, double sigma2, double omega);
double cnr_density(const ChannelTriple& ch, const FirFilter& h, double sigma2, double omega);

// r[k] = sum_n t[n] t[n-k]; zero for |k| >= order.
double source_autocorrelation(const FirFilter& t, int lag);

}  // namespace ltir
