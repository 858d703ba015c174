#pragma once

#include <functional>
#include <utility>

namespace ltir::detail {

// Coarse scan over [lo, hi] followed by golden-section refinement around the
// best sample. Handles mildly multimodal objectives. Returns (argmax, max).
std::pair<double, double> maximize_scalar(const std::function<double(double)>& f, double lo,
                                          double hi, int coarse = 65, double xtol = 1e-12);

}  // namespace ltir::detail
