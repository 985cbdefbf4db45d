#pragma once

#include <span>

#include "surfrank/nn/network.hpp"

namespace surfrank::nn {

/// Largest |analytic - central difference| / max(1, |central difference|)
/// over every parameter of `net`, differencing loss() with the given step.
double grad_check(const Network& net, const Tensor& batch, std::span<const Label> labels,
                  double step = 1e-5);

}  // namespace surfrank::nn
