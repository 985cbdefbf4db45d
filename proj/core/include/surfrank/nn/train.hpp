#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "surfrank/nn/network.hpp"
#include "surfrank/nn/optimizer.hpp"

namespace surfrank::nn {

struct TrainConfig {
    std::size_t epochs = 1500;
    /// Samples per mini-batch; 0 selects max(1, M/2).
    std::size_t batch_size = 0;
    AdamConfig adam;
    std::uint64_t seed = 0;
};

struct EpochRecord {
    std::size_t epoch = 0;
    /// Sample-weighted mean of the mini-batch losses seen during the epoch.
    double loss = 0.0;
    /// Fraction of label rows predicted correctly during the epoch's forward passes.
    double accuracy = 0.0;

    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainResult {
    Network network;
    std::vector<EpochRecord> history;
};

/// Mini-batch Adam on mean cross-entropy. `inputs` holds M samples along
/// axis 0; `labels` holds one label per output row, so an image sample
/// contributes height*width labels. Every epoch visits the samples in a
/// fresh order drawn from a generator seeded with config.seed.
/// Throws std::invalid_argument for an empty design or inconsistent sizes.
TrainResult train(Network net, const Tensor& inputs, std::span<const Label> labels,
                  const TrainConfig& config);

}  // namespace surfrank::nn
