#include "surfrank/nn/train.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace surfrank::nn {

TrainResult train(Network net, const Tensor& inputs, std::span<const Label> labels,
                  const TrainConfig& config) {
    if (inputs.rank() == 0 || inputs.dim(0) == 0) throw std::invalid_argument("cannot train on an empty design");
    if (config.epochs == 0) throw std::invalid_argument("training needs at least one epoch");
    const std::size_t m = inputs.dim(0);
    const std::size_t batch = config.batch_size == 0 ? std::max<std::size_t>(1, m / 2) : config.batch_size;
    if (batch > m)
        throw std::invalid_argument("batch size " + std::to_string(batch) + " exceeds the design size " +
                                    std::to_string(m));
    if (labels.size() % m != 0) throw std::invalid_argument("label count is not a multiple of the design size");
    const std::size_t label_rows = labels.size() / m;
    const std::size_t sample_size = inputs.size() / m;

    std::vector<std::size_t> batch_shape = inputs.shape();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 engine(config.seed);
    AdamState state = init_adam(net);

    TrainResult result;
    result.history.reserve(config.epochs);
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), engine);
        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < m; start += batch) {
            const std::size_t count = std::min(batch, m - start);
            batch_shape[0] = count;
            Tensor x(batch_shape);
            std::vector<Label> y;
            y.reserve(count * label_rows);
            for (std::size_t k = 0; k < count; ++k) {
                const std::size_t s = order[start + k];
                std::copy_n(inputs.data() + s * sample_size, sample_size, x.data() + k * sample_size);
                y.insert(y.end(), labels.begin() + static_cast<std::ptrdiff_t>(s * label_rows),
                         labels.begin() + static_cast<std::ptrdiff_t>((s + 1) * label_rows));
            }
            const Gradients g = backward(net, x, y);
            loss_sum += g.loss * static_cast<double>(count);
            for (std::size_t k = 0; k < y.size(); ++k)
                if (g.predicted[k] == y[k]) ++correct;
            adam_step(net, g, state, config.adam);
        }
        result.history.push_back(EpochRecord{epoch, loss_sum / static_cast<double>(m),
                                             static_cast<double>(correct) / static_cast<double>(labels.size())});
    }
    result.network = std::move(net);
    return result;
}

}  // namespace surfrank::nn
