#include "surfrank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "surfrank/parallel.hpp"

namespace surfrank {

std::string_view to_string(LabelSource source) {
    return source == LabelSource::noisy_label ? "noisy-label" : "true-label";
}

std::string_view to_string(NetKind kind) { return kind == NetKind::unet ? "unet" : "feedforward"; }

NetKind parse_net_kind(std::string_view name) {
    if (name == "feedforward" || name == "ff") return NetKind::feedforward;
    if (name == "unet") return NetKind::unet;
    throw std::invalid_argument("unknown network kind '" + std::string(name) +
                                "' (expected feedforward or unet)");
}

LabeledDesign label_design(const PointSet& points, const SurfaceSet& set, bool noisy,
                           std::uint64_t seed) {
    LabeledDesign d;
    d.points = points;
    d.source = noisy ? LabelSource::noisy_label : LabelSource::true_label;
    d.seed = seed;
    d.labels.resize(points.size());
    parallel_for(points.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            if (noisy) {
                Rng rng(seed, {p});
                d.labels[p] = set.noisy_label(points[p], rng);
            } else {
                d.labels[p] = set.true_label(points[p]);
            }
        }
    });
    return d;
}

double accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
    if (predicted.empty()) throw std::invalid_argument("accuracy of an empty labeling");
    if (predicted.size() != truth.size())
        throw std::invalid_argument("accuracy needs labelings of equal length");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

EvalGrid default_eval_grid(const SurfaceSet& set) {
    const auto& box = set.domain();
    switch (set.dimension()) {
        case 1: return EvalGrid::uniform(uniform_grid(box, 1001));
        case 2: return EvalGrid::uniform(uniform_grid(box, 101));
        default: {
            Rng rng(20000);
            return EvalGrid::uniform(latin_hypercube(box, 20000, rng));
        }
    }
}

namespace {

nn::Tensor scaled_inputs(const PointSet& points, const Box& box) {
    const std::size_t d = points.dimension();
    nn::Tensor t({points.size(), d});
    for (std::size_t p = 0; p < points.size(); ++p)
        box.to_unit(points[p], std::span<double>(t.data() + p * d, d));
    return t;
}

std::vector<Label> predict_points(const nn::Network& net, const PointSet& points, const Box& box) {
    const nn::Tensor inputs = scaled_inputs(points, box);
    const std::size_t d = points.dimension();
    std::vector<Label> labels(points.size());
    constexpr std::size_t chunk = 1024;
    const std::size_t chunks = (points.size() + chunk - 1) / chunk;
    parallel_for(chunks, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const std::size_t first = c * chunk;
            const std::size_t count = std::min(chunk, points.size() - first);
            nn::Tensor x({count, d});
            std::copy_n(inputs.data() + first * d, count * d, x.data());
            const auto part = nn::predict_labels(net, x);
            std::copy(part.begin(), part.end(), labels.begin() + static_cast<std::ptrdiff_t>(first));
        }
    });
    return labels;
}

// Per-class probabilities (rows x classes) of a single-column sigmoid output.
nn::Tensor class_probabilities(const nn::Tensor& out) {
    if (out.channels() != 1) return out;
    nn::Tensor p({out.rows(), 2});
    for (std::size_t r = 0; r < out.rows(); ++r) {
        p[2 * r] = out[r];
        p[2 * r + 1] = 1.0 - out[r];
    }
    return p;
}

std::vector<Label> interpolate_labels(const nn::Tensor& probs, std::size_t side, const Box& box,
                                      const PointSet& points) {
    const std::size_t classes = probs.channels();
    std::vector<Label> labels(points.size());
    std::vector<double> mix(classes);
    const double last = static_cast<double>(side - 1);
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto x = points[p];
        double f[2];
        std::size_t i0[2];
        for (std::size_t a = 0; a < 2; ++a) {
            const double u = std::clamp((x[a] - box.lower()[a]) / box.side(a) * last, 0.0, last);
            i0[a] = std::min(static_cast<std::size_t>(u), side - 2);
            f[a] = u - static_cast<double>(i0[a]);
        }
        std::fill(mix.begin(), mix.end(), 0.0);
        for (std::size_t dy = 0; dy < 2; ++dy)
            for (std::size_t dx = 0; dx < 2; ++dx) {
                const double w = (dy ? f[0] : 1.0 - f[0]) * (dx ? f[1] : 1.0 - f[1]);
                const auto row = probs.row((i0[0] + dy) * side + i0[1] + dx);
                for (std::size_t c = 0; c < classes; ++c) mix[c] += w * row[c];
            }
        const auto best = std::max_element(mix.begin(), mix.end()) - mix.begin();
        labels[p] = Label{static_cast<int>(best) + 1};
    }
    return labels;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

}  // namespace

ExperimentReport run_experiment(const SurfaceSet& set, const DesignConfig& design,
                                const NetConfig& net_cfg, const nn::TrainConfig& train_cfg,
                                const EvalGrid& grid) {
    grid.validate();
    const auto& box = set.domain();
    const std::size_t d = set.dimension();
    if (grid.points.dimension() != d) throw std::invalid_argument("evaluation grid has the wrong dimension");

    ExperimentReport report;
    KeyValues& cfg = report.config;
    cfg.set("example", set.name());
    cfg.set("dimension", d);
    cfg.set("surfaces", set.count());
    cfg.set("noise_sd", join_doubles(set.noise_sd()));
    cfg.set("design", std::string(to_string(design.kind)));
    if (design.kind == DesignKind::from_file) cfg.set("design_file", design.file.string());
    cfg.set("m", design.m);
    cfg.set("noisy", design.noisy);
    cfg.set("design_seed", static_cast<unsigned long long>(design.seed));
    cfg.set("net", std::string(to_string(net_cfg.kind)));
    if (net_cfg.kind == NetKind::feedforward)
        cfg.set("hidden", join_sizes(net_cfg.hidden));
    else
        cfg.set("unet_base", net_cfg.unet_base);
    cfg.set("l1", net_cfg.l1);
    cfg.set("l2", net_cfg.l2);
    cfg.set("init_seed", static_cast<unsigned long long>(net_cfg.init_seed));
    cfg.set("epochs", train_cfg.epochs);
    cfg.set("learning_rate", train_cfg.adam.learning_rate);
    cfg.set("beta1", train_cfg.adam.beta1);
    cfg.set("beta2", train_cfg.adam.beta2);
    cfg.set("epsilon", train_cfg.adam.epsilon);
    cfg.set("train_seed", static_cast<unsigned long long>(train_cfg.seed));
    cfg.set("eval_points", grid.points.size());

    const PointSet points = generate_design(design.kind, design.m, box, design.seed, design.file);
    for (std::size_t p = 0; p < points.size(); ++p)
        if (!box.contains(points[p])) throw std::invalid_argument("design point outside the surface domain");
    report.design = label_design(points, set, design.noisy, design.seed);
    const auto& labels = report.design.labels;

    report.truth.resize(grid.points.size());
    parallel_for(grid.points.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) report.truth[p] = set.true_label(grid.points[p]);
    });

    if (net_cfg.kind == NetKind::feedforward) {
        cfg.set("batch_size", train_cfg.batch_size == 0 ? std::max<std::size_t>(1, points.size() / 2)
                                                        : train_cfg.batch_size);
        auto specs = nn::build_feedforward(d, set.count(), net_cfg.hidden, net_cfg.l1, net_cfg.l2);
        auto result = nn::train(nn::init_network(std::move(specs), net_cfg.init_seed),
                                scaled_inputs(points, box), labels, train_cfg);
        report.network = std::move(result.network);
        report.history = std::move(result.history);
        report.train_accuracy = accuracy(predict_points(report.network, points, box), labels);
        report.predicted = predict_points(report.network, grid.points, box);
    } else {
        if (d != 2 || design.kind != DesignKind::uniform_grid)
            throw std::invalid_argument("the UNet needs a uniform-grid design in two dimensions");
        const std::size_t side = grid_side(points.size(), 2);
        cfg.set("batch_size", std::size_t{1});
        auto specs = nn::build_unet(side, side, d, set.count(), net_cfg.unet_base);
        for (auto& s : specs)
            if (s.activation == nn::Activation::relu) {
                s.l1 = net_cfg.l1;
                s.l2 = net_cfg.l2;
            }
        nn::Tensor image({1, side, side, d});
        for (std::size_t p = 0; p < points.size(); ++p)
            box.to_unit(points[p], std::span<double>(image.data() + p * d, d));
        nn::TrainConfig cfg1 = train_cfg;
        cfg1.batch_size = 1;
        auto result = nn::train(nn::init_network(std::move(specs), net_cfg.init_seed), image, labels, cfg1);
        report.network = std::move(result.network);
        report.history = std::move(result.history);
        const nn::Tensor probs = class_probabilities(nn::forward(report.network, image));
        report.train_accuracy = accuracy(nn::argmax_labels(probs), labels);
        report.predicted = interpolate_labels(probs, side, box, grid.points);
    }
    report.eval_points = grid.points;
    report.generalization_accuracy = 1.0 - ranking_loss(report.predicted, report.truth, grid);
    cfg.set("parameters", report.network.parameter_count());
    return report;
}

ExperimentPreset make_preset(std::string_view example, std::size_t m, NetKind kind,
                             std::uint64_t seed) {
    auto make = [&](SurfaceSet set, DesignKind design_kind, std::size_t default_m) {
        ExperimentPreset p{std::move(set), {}, {}, {}};
        p.design.kind = design_kind;
        p.design.m = m == 0 ? default_m : m;
        p.design.seed = seed;
        p.net.kind = kind;
        p.net.init_seed = derive_seed(seed, 1);
        p.train.seed = derive_seed(seed, 2);
        return p;
    };
    if (example == "1d") {
        auto p = make(make_1d_example(), DesignKind::uniform_grid, 128);
        const std::size_t width = std::max<std::size_t>(2, p.design.m / 8);
        p.net.hidden = {width, width};
        p.train.epochs = 1500;
        p.train.adam.learning_rate = 3e-4;
        return p;
    }
    if (example == "2d") {
        auto p = make(make_2d_example(), DesignKind::uniform_grid, 576);
        p.net.hidden = {64, 64, 64, 64};
        p.train.epochs = 1500;
        p.train.adam.learning_rate = 1e-4;
        if (kind == NetKind::unet) {
            p.net.unet_base = 32;
            p.train.epochs = 3000;
            p.train.adam.learning_rate = 1e-4;
        }
        return p;
    }
    if (example == "10d") {
        auto p = make(make_10d_example(), DesignKind::latin_hypercube, 65536);
        p.net.hidden = {64, 64, 64};
        p.train.epochs = 150;
        p.train.batch_size = 256;
        p.train.adam.learning_rate = 1e-3;
        return p;
    }
    throw std::invalid_argument("unknown example '" + std::string(example) + "' (expected 1d, 2d or 10d)");
}

void write_predictions_csv(const ExperimentReport& report, std::ostream& out) {
    const std::size_t d = report.eval_points.dimension();
    for (std::size_t a = 0; a < d; ++a) out << 'x' << a + 1 << ',';
    out << "predicted,true\n";
    for (std::size_t p = 0; p < report.eval_points.size(); ++p) {
        const auto x = report.eval_points[p];
        for (std::size_t a = 0; a < d; ++a) out << format_double(x[a]) << ',';
        out << report.predicted[p] << ',' << report.truth[p] << '\n';
    }
}

void write_report(const ExperimentReport& report, std::ostream& out) {
    KeyValues doc = report.config;
    doc.set("train_accuracy", report.train_accuracy);
    doc.set("generalization_accuracy", report.generalization_accuracy);
    doc.write(out);
    out << "\n[history]\nepoch,loss,accuracy\n";
    for (const auto& h : report.history)
        out << h.epoch << ',' << format_double(h.loss) << ',' << format_double(h.accuracy) << '\n';
    out << "\n[predictions]\n";
    write_predictions_csv(report, out);
}

}  // namespace surfrank
