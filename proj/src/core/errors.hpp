#pragma once

#include <stdexcept>
#include <string>

namespace ltir {

// An integrand evaluated to NaN/Inf at a quadrature node.
class NonFiniteIntegrand : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The relay quadratic form failed the positive-definiteness check.
class SingularForm : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// All three propagation channels are identically zero.
class DegenerateChannel : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A covariance Cholesky factorization failed (signals tap overflow).
class NumericalRankLoss : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Low-pass cutoff outside (0, pi].
class InfeasibleBand : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ltir
