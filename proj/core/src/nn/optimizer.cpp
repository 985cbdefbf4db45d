#include "surfrank/nn/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace surfrank::nn {

AdamState init_adam(const Network& net) {
    AdamState s;
    for (const auto& p : net.params()) {
        ParamBlock zero{p.weights.empty() ? Tensor{} : Tensor(p.weights.shape(), 0.0),
                        p.bias.empty() ? Tensor{} : Tensor(p.bias.shape(), 0.0)};
        s.m.push_back(zero);
        s.v.push_back(std::move(zero));
    }
    return s;
}

namespace {

void update(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v, double lr_t,
            const AdamConfig& c) {
    for (std::size_t k = 0; k < param.size(); ++k) {
        const double g = grad[k];
        m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g;
        v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g * g;
        param[k] -= lr_t * m[k] / (std::sqrt(v[k]) + c.epsilon);
    }
}

}  // namespace

void adam_step(Network& net, const Gradients& grads, AdamState& state, const AdamConfig& config) {
    auto& params = net.params();
    if (state.m.size() != params.size() || grads.blocks.size() != params.size())
        throw std::invalid_argument("optimizer state does not match the network");
    ++state.step;
    const auto t = static_cast<double>(state.step);
    const double lr_t = config.learning_rate * std::sqrt(1.0 - std::pow(config.beta2, t)) /
                        (1.0 - std::pow(config.beta1, t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].weights.empty()) continue;
        update(params[i].weights, grads.blocks[i].weights, state.m[i].weights, state.v[i].weights,
               lr_t, config);
        update(params[i].bias, grads.blocks[i].bias, state.m[i].bias, state.v[i].bias, lr_t,
               config);
    }
}

}  // namespace surfrank::nn
