#include "surfrank/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "kernels.hpp"

namespace surfrank::nn {

namespace {

std::vector<std::size_t> with_batch(std::size_t batch, const std::vector<std::size_t>& per_sample) {
    std::vector<std::size_t> s;
    s.reserve(per_sample.size() + 1);
    s.push_back(batch);
    s.insert(s.end(), per_sample.begin(), per_sample.end());
    return s;
}

std::size_t fan_in(const LayerSpec& spec, const std::vector<std::size_t>& in_shape) {
    return spec.kind == LayerKind::conv2d ? 9 * in_shape.back() : in_shape.back();
}

void apply_activation(Activation act, Tensor& t) {
    const std::size_t cols = t.channels();
    switch (act) {
        case Activation::identity:
            return;
        case Activation::relu:
            for (auto& v : t.values()) v = v > 0.0 ? v : 0.0;
            return;
        case Activation::sigmoid:
            for (auto& v : t.values()) {
                if (v >= 0.0) {
                    v = 1.0 / (1.0 + std::exp(-v));
                } else {
                    const double e = std::exp(v);
                    v = e / (1.0 + e);
                }
            }
            return;
        case Activation::softmax:
            for (std::size_t r = 0; r < t.rows(); ++r) {
                auto row = t.row(r);
                const double peak = *std::max_element(row.begin(), row.end());
                double sum = 0.0;
                for (auto& v : row) {
                    v = std::exp(v - peak);
                    sum += v;
                }
                for (auto& v : row) v /= sum;
            }
            (void)cols;
            return;
    }
}

// Gradient with respect to the pre-activation given the activation output
// `a` and the gradient `g` with respect to `a`.
Tensor activation_backward(Activation act, const Tensor& a, const Tensor& g) {
    Tensor dz = g;
    switch (act) {
        case Activation::identity:
            break;
        case Activation::relu:
            for (std::size_t i = 0; i < dz.size(); ++i)
                if (!(a[i] > 0.0)) dz[i] = 0.0;
            break;
        case Activation::sigmoid:
            for (std::size_t i = 0; i < dz.size(); ++i) dz[i] *= a[i] * (1.0 - a[i]);
            break;
        case Activation::softmax:
            for (std::size_t r = 0; r < dz.rows(); ++r) {
                auto ar = a.row(r);
                auto gr = g.row(r);
                double dot = 0.0;
                for (std::size_t j = 0; j < ar.size(); ++j) dot += ar[j] * gr[j];
                auto dr = dz.row(r);
                for (std::size_t j = 0; j < ar.size(); ++j) dr[j] = ar[j] * (gr[j] - dot);
            }
            break;
    }
    return dz;
}

void add_into(Tensor& dst, const Tensor& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void check_labels(std::span<const Label> labels, std::size_t rows, std::size_t classes) {
    if (labels.size() != rows)
        throw std::invalid_argument("expected " + std::to_string(rows) + " labels, got " +
                                    std::to_string(labels.size()));
    for (auto l : labels)
        if (l.value < 1 || static_cast<std::size_t>(l.value) > classes)
            throw std::out_of_range("label " + std::to_string(l.value) + " outside 1.." +
                                    std::to_string(classes));
}

}  // namespace

Network::Network(std::vector<LayerSpec> specs, std::vector<ParamBlock> params, std::uint64_t seed)
    : specs_(std::move(specs)), params_(std::move(params)), seed_(seed) {
    shapes_ = infer_shapes(specs_);
    if (params_.size() != specs_.size())
        throw std::invalid_argument("network needs one parameter block per layer");
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        const auto& s = specs_[i];
        const auto& p = params_[i];
        if (!s.has_parameters()) {
            if (!p.weights.empty() || !p.bias.empty())
                throw std::invalid_argument("layer " + std::to_string(i) + " takes no parameters");
            continue;
        }
        const std::vector<std::size_t> w_shape{fan_in(s, shapes_[i - 1]), s.units};
        const std::vector<std::size_t> b_shape{s.units};
        if (p.weights.shape() != w_shape || p.bias.shape() != b_shape)
            throw std::invalid_argument("layer " + std::to_string(i) + " has parameters of the wrong shape");
    }
}

std::size_t Network::classes() const {
    const auto units = specs_.back().units;
    return units == 1 ? 2 : units;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.weights.size() + p.bias.size();
    return n;
}

void Network::for_each_array(const std::function<void(std::span<double>)>& fn) {
    for (auto& p : params_) {
        if (!p.weights.empty()) fn(p.weights.values());
        if (!p.bias.empty()) fn(p.bias.values());
    }
}

void Network::for_each_array(const std::function<void(std::span<const double>)>& fn) const {
    for (const auto& p : params_) {
        if (!p.weights.empty()) fn(p.weights.values());
        if (!p.bias.empty()) fn(p.bias.values());
    }
}

Network init_network(std::vector<LayerSpec> specs, std::uint64_t seed) {
    const auto shapes = infer_shapes(specs);
    std::mt19937_64 engine(seed);
    std::vector<ParamBlock> params(specs.size());
    for (std::size_t i = 1; i < specs.size(); ++i) {
        const auto& s = specs[i];
        if (!s.has_parameters()) continue;
        const std::size_t in = fan_in(s, shapes[i - 1]);
        const std::size_t fan_out = s.kind == LayerKind::conv2d ? 9 * s.units : s.units;
        const double limit = std::sqrt(6.0 / static_cast<double>(in + fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Tensor w({in, s.units});
        for (auto& v : w.values()) v = dist(engine);
        params[i] = ParamBlock{std::move(w), Tensor({s.units}, 0.0)};
    }
    return Network(std::move(specs), std::move(params), seed);
}

Tensor forward(const Network& net, const Tensor& batch) {
    Trace trace;
    return forward(net, batch, trace);
}

Tensor forward(const Network& net, const Tensor& batch, Trace& trace) {
    const auto& in_shape = net.input_shape();
    if (batch.rank() != in_shape.size() + 1 || batch.dim(0) == 0 ||
        !std::equal(in_shape.begin(), in_shape.end(), batch.shape().begin() + 1))
        throw std::invalid_argument("batch shape does not match the network input");

    const std::size_t n = batch.dim(0);
    const auto& specs = net.specs();
    trace.outputs.assign(specs.size(), Tensor{});
    trace.argmax.assign(specs.size(), {});
    trace.outputs[0] = batch;

    for (std::size_t i = 1; i < specs.size(); ++i) {
        const auto& s = specs[i];
        const Tensor& in = trace.outputs[i - 1];
        Tensor out(with_batch(n, net.shape(i)));
        switch (s.kind) {
            case LayerKind::dense: {
                const auto& p = net.params()[i];
                kernels::affine_forward(in.data(), in.rows(), in.channels(), p.weights.data(),
                                        p.bias.data(), s.units, out.data());
                apply_activation(s.activation, out);
                break;
            }
            case LayerKind::conv2d: {
                const auto& p = net.params()[i];
                const std::size_t h = in.dim(1), w = in.dim(2), c = in.dim(3);
                std::vector<double> col(n * h * w * 9 * c);
                kernels::im2col3x3(in.data(), n, h, w, c, col.data());
                kernels::affine_forward(col.data(), n * h * w, 9 * c, p.weights.data(),
                                        p.bias.data(), s.units, out.data());
                apply_activation(s.activation, out);
                break;
            }
            case LayerKind::maxpool2d: {
                const std::size_t h = in.dim(1), w = in.dim(2), c = in.dim(3);
                const std::size_t oh = h / 2, ow = w / 2;
                auto& arg = trace.argmax[i];
                arg.assign(out.size(), 0);
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t y = 0; y < oh; ++y)
                        for (std::size_t x = 0; x < ow; ++x)
                            for (std::size_t ch = 0; ch < c; ++ch) {
                                const std::size_t o = ((b * oh + y) * ow + x) * c + ch;
                                std::size_t best = ((b * h + 2 * y) * w + 2 * x) * c + ch;
                                for (std::size_t dy = 0; dy < 2; ++dy)
                                    for (std::size_t dx = 0; dx < 2; ++dx) {
                                        const std::size_t idx =
                                            ((b * h + 2 * y + dy) * w + 2 * x + dx) * c + ch;
                                        if (in[idx] > in[best]) best = idx;
                                    }
                                out[o] = in[best];
                                arg[o] = best;
                            }
                break;
            }
            case LayerKind::upsample2d: {
                const std::size_t h = in.dim(1), w = in.dim(2), c = in.dim(3);
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t y = 0; y < 2 * h; ++y)
                        for (std::size_t x = 0; x < 2 * w; ++x) {
                            const double* src = in.data() + ((b * h + y / 2) * w + x / 2) * c;
                            double* dst = out.data() + ((b * 2 * h + y) * 2 * w + x) * c;
                            std::copy(src, src + c, dst);
                        }
                break;
            }
            case LayerKind::concat: {
                const Tensor& other = trace.outputs[s.skip];
                const std::size_t c1 = in.channels(), c2 = other.channels();
                for (std::size_t r = 0; r < out.rows(); ++r) {
                    auto dst = out.row(r);
                    auto a = in.row(r);
                    auto b = other.row(r);
                    std::copy(a.begin(), a.end(), dst.begin());
                    std::copy(b.begin(), b.end(), dst.begin() + static_cast<std::ptrdiff_t>(c1));
                }
                (void)c2;
                break;
            }
            case LayerKind::activation:
                out = in;
                apply_activation(s.activation, out);
                break;
            case LayerKind::input:
                throw std::logic_error("input layer in the middle of a network");
        }
        trace.outputs[i] = std::move(out);
    }
    return trace.outputs.back();
}

double cross_entropy(const Tensor& probs, std::span<const Label> labels) {
    const std::size_t rows = probs.rows();
    const std::size_t cols = probs.channels();
    if (rows == 0) throw std::invalid_argument("cross-entropy of an empty batch");
    check_labels(labels, rows, cols == 1 ? 2 : cols);
    constexpr double lo = 1e-12, hi = 1.0 - 1e-12;
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        double p;
        if (cols == 1) {
            const double p1 = probs[r];
            p = labels[r].value == 1 ? p1 : 1.0 - p1;
        } else {
            p = probs[r * cols + labels[r].index()];
        }
        total -= std::log(std::clamp(p, lo, hi));
    }
    return total / static_cast<double>(rows);
}

double activity_penalty(const Network& net, const Trace& trace) {
    double penalty = 0.0;
    const auto& specs = net.specs();
    for (std::size_t i = 1; i < specs.size(); ++i) {
        const auto& s = specs[i];
        if (s.l1 == 0.0 && s.l2 == 0.0) continue;
        const Tensor& a = trace.outputs[i];
        double sum = 0.0;
        for (double v : a.values()) sum += s.l1 * std::abs(v) + s.l2 * v * v;
        penalty += sum / static_cast<double>(a.dim(0));
    }
    return penalty;
}

double loss(const Network& net, const Tensor& batch, std::span<const Label> labels) {
    Trace trace;
    const Tensor probs = forward(net, batch, trace);
    return cross_entropy(probs, labels) + activity_penalty(net, trace);
}

Gradients backward(const Network& net, const Tensor& batch, std::span<const Label> labels) {
    Trace trace;
    const Tensor probs = forward(net, batch, trace);

    Gradients grads;
    grads.loss = cross_entropy(probs, labels) + activity_penalty(net, trace);
    grads.predicted = argmax_labels(probs);

    const auto& specs = net.specs();
    const std::size_t last = specs.size() - 1;
    const std::size_t n = batch.dim(0);

    grads.blocks.resize(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& p = net.params()[i];
        if (!specs[i].has_parameters()) continue;
        grads.blocks[i] = ParamBlock{Tensor(p.weights.shape(), 0.0), Tensor(p.bias.shape(), 0.0)};
    }

    // Gradient with respect to every layer output, accumulated from all consumers.
    std::vector<Tensor> d_out(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) d_out[i] = Tensor(trace.outputs[i].shape(), 0.0);

    auto add_regularizer_grad = [&](std::size_t i) {
        const auto& s = specs[i];
        if (s.l1 == 0.0 && s.l2 == 0.0) return;
        const Tensor& a = trace.outputs[i];
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double v = a[k];
            const double sign = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
            d_out[i][k] += scale * (s.l1 * sign + 2.0 * s.l2 * v);
        }
    };

    for (std::size_t i = last; i >= 1; --i) {
        const auto& s = specs[i];
        const Tensor& in = trace.outputs[i - 1];
        const Tensor& out = trace.outputs[i];
        add_regularizer_grad(i);

        Tensor dz;
        if (i == last) {
            // Closed-form head: d(mean CE)/dz = (p - y) / rows.
            dz = activation_backward(s.activation, out, d_out[i]);
            const std::size_t rows = out.rows();
            const std::size_t cols = out.channels();
            const double inv = 1.0 / static_cast<double>(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                if (cols == 1) {
                    const double y = labels[r].value == 1 ? 1.0 : 0.0;
                    dz[r] += (out[r] - y) * inv;
                } else {
                    for (std::size_t j = 0; j < cols; ++j) {
                        const double y = j == labels[r].index() ? 1.0 : 0.0;
                        dz[r * cols + j] += (out[r * cols + j] - y) * inv;
                    }
                }
            }
        } else if (s.kind == LayerKind::dense || s.kind == LayerKind::conv2d ||
                   s.kind == LayerKind::activation) {
            dz = activation_backward(s.activation, out, d_out[i]);
        }

        // Nothing consumes the gradient with respect to the network input.
        const bool need_input_grad = i > 1;
        switch (s.kind) {
            case LayerKind::dense: {
                auto& g = grads.blocks[i];
                Tensor din(in.shape(), 0.0);
                kernels::affine_backward(in.data(), in.rows(), in.channels(),
                                         net.params()[i].weights.data(), s.units, dz.data(),
                                         g.weights.data(), g.bias.data(),
                                         need_input_grad ? din.data() : nullptr);
                if (need_input_grad) add_into(d_out[i - 1], din);
                break;
            }
            case LayerKind::conv2d: {
                auto& g = grads.blocks[i];
                const std::size_t h = in.dim(1), w = in.dim(2), c = in.dim(3);
                const std::size_t rows = n * h * w;
                std::vector<double> col(rows * 9 * c);
                kernels::im2col3x3(in.data(), n, h, w, c, col.data());
                std::vector<double> dcol(need_input_grad ? col.size() : 0);
                kernels::affine_backward(col.data(), rows, 9 * c, net.params()[i].weights.data(),
                                         s.units, dz.data(), g.weights.data(), g.bias.data(),
                                         need_input_grad ? dcol.data() : nullptr);
                if (need_input_grad) kernels::col2im3x3(dcol.data(), n, h, w, c, d_out[i - 1].data());
                break;
            }
            case LayerKind::maxpool2d: {
                const auto& arg = trace.argmax[i];
                for (std::size_t k = 0; k < arg.size(); ++k) d_out[i - 1][arg[k]] += d_out[i][k];
                break;
            }
            case LayerKind::upsample2d: {
                const std::size_t h = in.dim(1), w = in.dim(2), c = in.dim(3);
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t y = 0; y < 2 * h; ++y)
                        for (std::size_t x = 0; x < 2 * w; ++x) {
                            const double* src = d_out[i].data() + ((b * 2 * h + y) * 2 * w + x) * c;
                            double* dst = d_out[i - 1].data() + ((b * h + y / 2) * w + x / 2) * c;
                            for (std::size_t ch = 0; ch < c; ++ch) dst[ch] += src[ch];
                        }
                break;
            }
            case LayerKind::concat: {
                const std::size_t c1 = in.channels();
                Tensor& d_skip = d_out[s.skip];
                const std::size_t c2 = trace.outputs[s.skip].channels();
                for (std::size_t r = 0; r < out.rows(); ++r) {
                    auto g = d_out[i].row(r);
                    if (i - 1 > 0) {
                        auto a = d_out[i - 1].row(r);
                        for (std::size_t j = 0; j < c1; ++j) a[j] += g[j];
                    }
                    if (s.skip > 0) {
                        auto b = d_skip.row(r);
                        for (std::size_t j = 0; j < c2; ++j) b[j] += g[c1 + j];
                    }
                }
                break;
            }
            case LayerKind::activation:
                if (i > 1) add_into(d_out[i - 1], dz);
                break;
            case LayerKind::input:
                break;
        }
    }
    return grads;
}

std::vector<Label> argmax_labels(const Tensor& probs) {
    const std::size_t rows = probs.rows();
    const std::size_t cols = probs.channels();
    std::vector<Label> labels(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        if (cols == 1) {
            labels[r] = Label{probs[r] >= 0.5 ? 1 : 2};
            continue;
        }
        auto row = probs.row(r);
        std::size_t best = 0;
        for (std::size_t j = 1; j < cols; ++j)
            if (row[j] > row[best]) best = j;
        labels[r] = Label{static_cast<int>(best) + 1};
    }
    return labels;
}

std::vector<Label> predict_labels(const Network& net, const Tensor& points) {
    return argmax_labels(forward(net, points));
}

}  // namespace surfrank::nn
