#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace surfrank::nn {

enum class LayerKind { input, dense, conv2d, maxpool2d, upsample2d, concat, activation };
enum class Activation { identity, relu, sigmoid, softmax };

std::string_view to_string(LayerKind kind);
std::string_view to_string(Activation act);
LayerKind parse_layer_kind(std::string_view name);
Activation parse_activation(std::string_view name);

/// One node of a network description.
///
/// Layer i consumes the output of layer i-1; a concat layer additionally
/// consumes the output of layer `skip` (an earlier index) and stacks its
/// channels after the current ones. Dense layers act on the last axis, so on
/// image tensors they are per-pixel blocks. Convolutions are 3x3 with zero
/// "same" padding; pooling and upsampling use a factor of 2.
struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    /// Dense units or conv2d filters.
    std::size_t units = 0;
    Activation activation = Activation::identity;
    /// Per-sample shape for the input layer: {features} or {height, width, channels}.
    std::vector<std::size_t> shape;
    std::size_t skip = 0;
    /// Activity regularizer on this layer's output: l1*|a| + l2*a^2, summed
    /// over the output and divided by the batch size.
    double l1 = 0.0;
    double l2 = 0.0;

    static LayerSpec input(std::vector<std::size_t> shape);
    static LayerSpec dense(std::size_t units, Activation act, double l1 = 0.0, double l2 = 0.0);
    static LayerSpec conv2d(std::size_t filters, Activation act);
    static LayerSpec maxpool2d();
    static LayerSpec upsample2d();
    static LayerSpec concat(std::size_t skip);
    static LayerSpec activation_layer(Activation act, double l1 = 0.0, double l2 = 0.0);

    bool has_parameters() const { return kind == LayerKind::dense || kind == LayerKind::conv2d; }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Per-sample output shape of every layer. Throws std::invalid_argument when
/// the chain does not compose (bad skip index, odd spatial size before a pool,
/// mismatched concat, missing or misplaced input layer, bad output head).
std::vector<std::vector<std::size_t>> infer_shapes(const std::vector<LayerSpec>& specs);

/// Output head for L classes: 1 sigmoid unit for L = 2, L softmax units otherwise.
LayerSpec output_layer(std::size_t classes);

/// Dense ReLU stack from d inputs to the classification head.
std::vector<LayerSpec> build_feedforward(std::size_t d, std::size_t classes,
                                         const std::vector<std::size_t>& hidden, double l1 = 0.0,
                                         double l2 = 0.0);

/// Two-level UNet over a grid_h x grid_w image whose d channels are point
/// coordinates: conv3x3 -> dense -> maxpool -> dense (2x channels) ->
/// upsample -> concat with the pre-pool block -> dense -> per-pixel head.
std::vector<LayerSpec> build_unet(std::size_t grid_h, std::size_t grid_w, std::size_t d,
                                  std::size_t classes, std::size_t base_channels = 8);

}  // namespace surfrank::nn
