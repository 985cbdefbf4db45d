#include "surfrank/nn/layers.hpp"

#include <stdexcept>
#include <string>

namespace surfrank::nn {

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::input: return "input";
        case LayerKind::dense: return "dense";
        case LayerKind::conv2d: return "conv2d";
        case LayerKind::maxpool2d: return "maxpool2d";
        case LayerKind::upsample2d: return "upsample2d";
        case LayerKind::concat: return "concat";
        case LayerKind::activation: return "activation";
    }
    return "unknown";
}

std::string_view to_string(Activation act) {
    switch (act) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::softmax: return "softmax";
    }
    return "unknown";
}

LayerKind parse_layer_kind(std::string_view name) {
    for (auto k : {LayerKind::input, LayerKind::dense, LayerKind::conv2d, LayerKind::maxpool2d,
                   LayerKind::upsample2d, LayerKind::concat, LayerKind::activation})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown layer kind '" + std::string(name) + "'");
}

Activation parse_activation(std::string_view name) {
    for (auto a : {Activation::identity, Activation::relu, Activation::sigmoid, Activation::softmax})
        if (to_string(a) == name) return a;
    throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

LayerSpec LayerSpec::input(std::vector<std::size_t> shape) {
    LayerSpec s;
    s.kind = LayerKind::input;
    s.shape = std::move(shape);
    return s;
}

LayerSpec LayerSpec::dense(std::size_t units, Activation act, double l1, double l2) {
    LayerSpec s;
    s.kind = LayerKind::dense;
    s.units = units;
    s.activation = act;
    s.l1 = l1;
    s.l2 = l2;
    return s;
}

LayerSpec LayerSpec::conv2d(std::size_t filters, Activation act) {
    LayerSpec s;
    s.kind = LayerKind::conv2d;
    s.units = filters;
    s.activation = act;
    return s;
}

LayerSpec LayerSpec::maxpool2d() {
    LayerSpec s;
    s.kind = LayerKind::maxpool2d;
    return s;
}

LayerSpec LayerSpec::upsample2d() {
    LayerSpec s;
    s.kind = LayerKind::upsample2d;
    return s;
}

LayerSpec LayerSpec::concat(std::size_t skip) {
    LayerSpec s;
    s.kind = LayerKind::concat;
    s.skip = skip;
    return s;
}

LayerSpec LayerSpec::activation_layer(Activation act, double l1, double l2) {
    LayerSpec s;
    s.kind = LayerKind::activation;
    s.activation = act;
    s.l1 = l1;
    s.l2 = l2;
    return s;
}

std::vector<std::vector<std::size_t>> infer_shapes(const std::vector<LayerSpec>& specs) {
    auto fail = [](std::size_t i, const std::string& why) {
        throw std::invalid_argument("layer " + std::to_string(i) + ": " + why);
    };
    if (specs.size() < 2 || specs.front().kind != LayerKind::input)
        throw std::invalid_argument("a network starts with an input layer and has at least one more layer");

    std::vector<std::vector<std::size_t>> shapes;
    shapes.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& s = specs[i];
        if (s.l1 < 0.0 || s.l2 < 0.0) fail(i, "regularizer weights must be non-negative");
        if (s.kind == LayerKind::input) {
            if (i != 0) fail(i, "input layer must come first");
            if (s.shape.size() != 1 && s.shape.size() != 3) fail(i, "input shape must have 1 or 3 axes");
            for (auto v : s.shape)
                if (v == 0) fail(i, "input shape has a zero extent");
            shapes.push_back(s.shape);
            continue;
        }
        auto in = shapes.back();
        switch (s.kind) {
            case LayerKind::dense:
                if (s.units == 0) fail(i, "dense layer needs at least one unit");
                in.back() = s.units;
                break;
            case LayerKind::conv2d:
                if (in.size() != 3) fail(i, "conv2d needs an image input");
                if (s.units == 0) fail(i, "conv2d needs at least one filter");
                in.back() = s.units;
                break;
            case LayerKind::maxpool2d:
                if (in.size() != 3) fail(i, "maxpool2d needs an image input");
                if (in[0] % 2 || in[1] % 2) fail(i, "maxpool2d needs even height and width");
                in[0] /= 2;
                in[1] /= 2;
                break;
            case LayerKind::upsample2d:
                if (in.size() != 3) fail(i, "upsample2d needs an image input");
                in[0] *= 2;
                in[1] *= 2;
                break;
            case LayerKind::concat: {
                if (s.skip >= i) fail(i, "concat skip index must refer to an earlier layer");
                const auto& other = shapes[s.skip];
                if (other.size() != in.size()) fail(i, "concat inputs have different ranks");
                for (std::size_t a = 0; a + 1 < in.size(); ++a)
                    if (other[a] != in[a]) fail(i, "concat inputs have different spatial sizes");
                in.back() += other.back();
                break;
            }
            case LayerKind::activation:
                break;
            case LayerKind::input:
                break;
        }
        shapes.push_back(std::move(in));
    }

    const auto& last = specs.back();
    if (last.kind != LayerKind::dense) throw std::invalid_argument("the output layer must be dense");
    if (last.units == 1 && last.activation != Activation::sigmoid)
        throw std::invalid_argument("a single-unit output layer must use sigmoid");
    if (last.units >= 2 && last.activation != Activation::softmax)
        throw std::invalid_argument("a multi-unit output layer must use softmax");
    return shapes;
}

LayerSpec output_layer(std::size_t classes) {
    if (classes < 2) throw std::invalid_argument("classification needs at least two classes");
    return classes == 2 ? LayerSpec::dense(1, Activation::sigmoid)
                        : LayerSpec::dense(classes, Activation::softmax);
}

std::vector<LayerSpec> build_feedforward(std::size_t d, std::size_t classes,
                                         const std::vector<std::size_t>& hidden, double l1,
                                         double l2) {
    if (d == 0) throw std::invalid_argument("input dimension must be positive");
    std::vector<LayerSpec> specs{LayerSpec::input({d})};
    for (auto width : hidden) specs.push_back(LayerSpec::dense(width, Activation::relu, l1, l2));
    specs.push_back(output_layer(classes));
    infer_shapes(specs);
    return specs;
}

std::vector<LayerSpec> build_unet(std::size_t grid_h, std::size_t grid_w, std::size_t d,
                                  std::size_t classes, std::size_t base_channels) {
    if (grid_h == 0 || grid_w == 0 || grid_h % 2 || grid_w % 2)
        throw std::invalid_argument("UNet grid height and width must be positive and even, got " +
                                    std::to_string(grid_h) + "x" + std::to_string(grid_w));
    if (base_channels == 0) throw std::invalid_argument("UNet needs at least one base channel");
    std::vector<LayerSpec> specs{
        LayerSpec::input({grid_h, grid_w, d}),
        LayerSpec::conv2d(base_channels, Activation::relu),
        LayerSpec::dense(base_channels, Activation::relu),  // index 2: pre-pool features
        LayerSpec::maxpool2d(),
        LayerSpec::dense(2 * base_channels, Activation::relu),
        LayerSpec::upsample2d(),
        LayerSpec::concat(2),
        LayerSpec::dense(base_channels, Activation::relu),
        output_layer(classes),
    };
    infer_shapes(specs);
    return specs;
}

}  // namespace surfrank::nn
