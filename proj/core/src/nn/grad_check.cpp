#include "surfrank/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace surfrank::nn {

double grad_check(const Network& net, const Tensor& batch, std::span<const Label> labels,
                  double step) {
    const Gradients analytic = backward(net, batch, labels);
    Network probe = net;
    double worst = 0.0;
    auto check = [&](Tensor& param, const Tensor& grad) {
        for (std::size_t k = 0; k < param.size(); ++k) {
            const double saved = param[k];
            param[k] = saved + step;
            const double up = loss(probe, batch, labels);
            param[k] = saved - step;
            const double down = loss(probe, batch, labels);
            param[k] = saved;
            const double fd = (up - down) / (2.0 * step);
            worst = std::max(worst, std::abs(grad[k] - fd) / std::max(1.0, std::abs(fd)));
        }
    };
    for (std::size_t i = 0; i < probe.params().size(); ++i) {
        auto& p = probe.params()[i];
        if (p.weights.empty()) continue;
        check(p.weights, analytic.blocks[i].weights);
        check(p.bias, analytic.blocks[i].bias);
    }
    return worst;
}

}  // namespace surfrank::nn
