#pragma once

#include <vector>

#include "surfrank/nn/network.hpp"

namespace surfrank::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First and second moment estimates, shaped like the network parameters.
struct AdamState {
    std::vector<ParamBlock> m;
    std::vector<ParamBlock> v;
    long step = 0;
};

AdamState init_adam(const Network& net);

/// One bias-corrected Adam update of every parameter.
void adam_step(Network& net, const Gradients& grads, AdamState& state, const AdamConfig& config);

}  // namespace surfrank::nn
