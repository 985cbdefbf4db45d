#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "surfrank/nn/layers.hpp"
#include "surfrank/nn/tensor.hpp"
#include "surfrank/types.hpp"

namespace surfrank::nn {

/// Weights and bias of one parameterized layer; both empty for layers
/// without parameters. Dense weights are (in x out); conv2d weights are
/// (9*in_channels x filters) with rows ordered (ky, kx, channel).
struct ParamBlock {
    Tensor weights;
    Tensor bias;

    friend bool operator==(const ParamBlock&, const ParamBlock&) = default;
};

/// A layer chain with at most skip connections through concat layers,
/// plus its parameters. Value type: copies are independent networks.
class Network {
public:
    Network() = default;
    /// Validates the specs and that every parameter block has the shape the
    /// specs imply.
    Network(std::vector<LayerSpec> specs, std::vector<ParamBlock> params, std::uint64_t seed);

    const std::vector<LayerSpec>& specs() const { return specs_; }
    const std::vector<ParamBlock>& params() const { return params_; }
    std::vector<ParamBlock>& params() { return params_; }
    std::uint64_t seed() const { return seed_; }

    std::size_t layer_count() const { return specs_.size(); }
    /// Per-sample shape of layer i's output (layer 0 is the input).
    const std::vector<std::size_t>& shape(std::size_t i) const { return shapes_[i]; }
    const std::vector<std::size_t>& input_shape() const { return shapes_.front(); }
    /// Number of classes the head distinguishes (2 for a sigmoid head).
    std::size_t classes() const;
    std::size_t parameter_count() const;

    /// Visits every parameter array (weights then bias, layer by layer).
    void for_each_array(const std::function<void(std::span<double>)>& fn);
    void for_each_array(const std::function<void(std::span<const double>)>& fn) const;

    friend bool operator==(const Network&, const Network&) = default;

private:
    std::vector<LayerSpec> specs_;
    std::vector<std::vector<std::size_t>> shapes_;
    std::vector<ParamBlock> params_;
    std::uint64_t seed_ = 0;
};

/// Glorot-uniform weights (limit sqrt(6 / (fan_in + fan_out))), zero biases,
/// drawn from a generator seeded with `seed`.
Network init_network(std::vector<LayerSpec> specs, std::uint64_t seed);

/// Intermediate outputs kept by a forward pass for backpropagation.
struct Trace {
    std::vector<Tensor> outputs;
    /// For maxpool layers: flat input index of the maximum of every output cell.
    std::vector<std::vector<std::size_t>> argmax;
};

/// Probabilities for a batch whose shape is (batch, per-sample input shape).
/// A sigmoid head yields P(label 1) per row; a softmax head yields one
/// probability per class per row. Throws std::invalid_argument on a shape
/// mismatch.
Tensor forward(const Network& net, const Tensor& batch);
Tensor forward(const Network& net, const Tensor& batch, Trace& trace);

/// Mean negative log-likelihood over rows, probabilities clamped to
/// [1e-12, 1 - 1e-12]. For one-column input the column is P(label 1).
/// Throws std::out_of_range for a label outside the class range.
double cross_entropy(const Tensor& probs, std::span<const Label> labels);

/// Activity-regularizer penalty of a traced forward pass.
double activity_penalty(const Network& net, const Trace& trace);

/// Cross-entropy plus activity penalty.
double loss(const Network& net, const Tensor& batch, std::span<const Label> labels);

struct Gradients {
    std::vector<ParamBlock> blocks;
    double loss = 0.0;
    /// Labels predicted by the forward pass the gradient was taken at.
    std::vector<Label> predicted;
};

/// Gradient of loss() with respect to every parameter. The head uses the
/// closed-form derivative of cross-entropy through sigmoid/softmax
/// (p - y per row, averaged over rows).
Gradients backward(const Network& net, const Tensor& batch, std::span<const Label> labels);

/// Row-wise argmax of a probability tensor, 1-based, smallest index on ties.
/// A single column is read as P(label 1): label 1 iff p >= 0.5.
std::vector<Label> argmax_labels(const Tensor& probs);

std::vector<Label> predict_labels(const Network& net, const Tensor& points);

}  // namespace surfrank::nn
