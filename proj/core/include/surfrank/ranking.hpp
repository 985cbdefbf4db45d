#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surfrank/design.hpp"
#include "surfrank/kv.hpp"
#include "surfrank/nn/network.hpp"
#include "surfrank/nn/train.hpp"
#include "surfrank/surfaces.hpp"

namespace surfrank {

enum class LabelSource { true_label, noisy_label };

std::string_view to_string(LabelSource source);

/// Design points with one label each.
struct LabeledDesign {
    PointSet points;
    std::vector<Label> labels;
    LabelSource source = LabelSource::true_label;
    std::uint64_t seed = 0;
};

/// Labels every point by the true argmin, or by the argmin of one fresh
/// noisy draw per surface. Point p draws from substream (seed, p), so labels
/// do not depend on evaluation order.
LabeledDesign label_design(const PointSet& points, const SurfaceSet& set, bool noisy,
                           std::uint64_t seed);

/// Fraction of positions where the two sequences agree. Throws
/// std::invalid_argument on empty input or a length mismatch.
double accuracy(std::span<const Label> predicted, std::span<const Label> truth);

enum class NetKind { feedforward, unet };

std::string_view to_string(NetKind kind);
NetKind parse_net_kind(std::string_view name);

struct NetConfig {
    NetKind kind = NetKind::feedforward;
    /// Hidden dense widths (feed-forward only).
    std::vector<std::size_t> hidden{64, 64};
    /// First-level channel count (UNet only).
    std::size_t unet_base = 8;
    /// Activity regularizer weights applied to every hidden layer.
    double l1 = 0.0;
    double l2 = 0.0;
    std::uint64_t init_seed = 0;
};

struct DesignConfig {
    DesignKind kind = DesignKind::uniform_grid;
    std::size_t m = 128;
    bool noisy = false;
    /// Seeds the design (LHS) and, through substreams, the noisy labels.
    std::uint64_t seed = 0;
    std::filesystem::path file;
};

struct ExperimentReport {
    double train_accuracy = 0.0;
    double generalization_accuracy = 0.0;
    LabeledDesign design;
    PointSet eval_points;
    std::vector<Label> predicted;
    std::vector<Label> truth;
    std::vector<nn::EpochRecord> history;
    /// Effective configuration, echoed into the report.
    KeyValues config;
    nn::Network network;
};

/// Dense evaluation grid for the built-in examples: 1001 points in 1D,
/// 101 x 101 in 2D, otherwise 20000 LHS points from a fixed seed.
EvalGrid default_eval_grid(const SurfaceSet& set);

/// Generates and labels the design, trains the classifier and scores it
/// against the true classifier on the grid. Network inputs are the design
/// points mapped onto [-1, 1]^d.
///
/// A UNet sees the whole uniform 2D design as one image (one channel per
/// coordinate) and predicts one label per pixel. Off-grid points are
/// classified by bilinear interpolation of the per-class probabilities
/// between the four surrounding pixels. Requires a 2D uniform grid with an
/// even number of points per axis.
ExperimentReport run_experiment(const SurfaceSet& set, const DesignConfig& design,
                                const NetConfig& net, const nn::TrainConfig& train,
                                const EvalGrid& grid);

/// Tuned settings for one built-in example.
struct ExperimentPreset {
    SurfaceSet set;
    DesignConfig design;
    NetConfig net;
    nn::TrainConfig train;
};

/// Presets for "1d", "2d" and "10d" (m = 0 picks the example's default
/// budget). The 1D widths follow the budget: two hidden layers of M/8.
/// Design, initialization and shuffling seeds all derive from `seed`.
/// Throws std::invalid_argument for an unknown example.
ExperimentPreset make_preset(std::string_view example, std::size_t m, NetKind kind,
                             std::uint64_t seed);

/// Report document: the config echo and accuracies as key=value lines, then
/// a "[history]" CSV block (epoch,loss,accuracy) and a "[predictions]" CSV
/// block (x1..xd,predicted,true) over the evaluation grid.
void write_report(const ExperimentReport& report, std::ostream& out);

/// Only the "[predictions]" CSV block's content (header plus rows).
void write_predictions_csv(const ExperimentReport& report, std::ostream& out);

}  // namespace surfrank
