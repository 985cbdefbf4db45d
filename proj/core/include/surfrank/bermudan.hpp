#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "surfrank/design.hpp"
#include "surfrank/kv.hpp"
#include "surfrank/nn/network.hpp"
#include "surfrank/nn/train.hpp"
#include "surfrank/rng.hpp"
#include "surfrank/types.hpp"

namespace surfrank {

/// d independent geometric Brownian motions with common rate, dividend
/// yield and volatility.
struct GbmModel {
    double rate = 0.05;
    double dividend = 0.10;
    double volatility = 0.2;
    std::vector<double> x0{90.0, 90.0};

    std::size_t dimension() const { return x0.size(); }
    /// Throws std::invalid_argument unless volatility > 0, d >= 1 and x0 > 0.
    void validate() const;
};

/// Exercise dates t_i = i * T / N, i = 0..N.
struct ExerciseSchedule {
    double maturity = 3.0;
    std::size_t dates = 9;

    double time(std::size_t i) const {
        return maturity * static_cast<double>(i) / static_cast<double>(dates);
    }
    double step() const { return maturity / static_cast<double>(dates); }
    void validate() const;
};

/// Max-call discounted to time zero: h(t, x) = exp(-r t) (max_i x_i - K)_+.
struct MaxCallPayoff {
    double strike = 100.0;
    double rate = 0.05;

    double operator()(double t, std::span<const double> x) const;
};

/// The parameter set of the reference experiments: r = 5%, delta = 10%,
/// sigma = 20%, K = 100, T = 3, N = 9, all assets starting at `x0`.
GbmModel reference_model(std::size_t d, double x0);
ExerciseSchedule reference_schedule();
MaxCallPayoff reference_payoff();

/// R simulated paths over dates from_index..N, start included, stored as
/// (path, date, asset) row-major.
struct PathArray {
    std::size_t paths = 0;
    std::size_t dates = 0;
    std::size_t dim = 0;
    std::vector<double> values;

    std::span<const double> at(std::size_t path, std::size_t date) const {
        return {values.data() + (path * dates + date) * dim, dim};
    }
};

/// Exact lognormal stepping between consecutive dates, one standard normal
/// per asset per step. Draw order is path, then date, then asset.
PathArray simulate_paths(const GbmModel& model, std::span<const double> start,
                         std::size_t from_index, const ExerciseSchedule& schedule,
                         std::size_t count, Rng& rng);

/// Label convention of the decision maps.
inline constexpr Label kContinue{1};
inline constexpr Label kStop{2};

/// Stop/continue classifier for one exercise date: a trained network over
/// the domain box (inputs mapped onto [-1, 1]^d, output P(continue)), or a
/// constant decision.
class DecisionMap {
public:
    enum class Kind { network, always_stop, always_continue };

    DecisionMap() = default;
    static DecisionMap constant(Label decision);
    DecisionMap(nn::Network net, Box domain);

    Kind kind() const { return kind_; }
    const nn::Network& network() const { return net_; }
    const Box& domain() const { return domain_; }

    /// P(continue) for every row of `points` (count x d, row-major).
    std::vector<double> continue_probability(std::span<const double> points, std::size_t count) const;
    /// Stop iff P(continue) < 0.5.
    std::vector<bool> stops(std::span<const double> points, std::size_t count) const;

private:
    Kind kind_ = Kind::always_stop;
    nn::Network net_;
    Box domain_;
};

std::string_view to_string(DecisionMap::Kind kind);

/// Decision maps for dates t_1..t_{N-1}; the map at t_N is always "stop".
struct DecisionMapSequence {
    ExerciseSchedule schedule;
    Box domain;
    std::vector<DecisionMap> maps;
    /// Budgets, seeds, model and per-date label counts.
    KeyValues metadata;

    /// Map at date index i in 1..N (i = N yields the constant stop map).
    const DecisionMap& at(std::size_t i) const;
};

/// Discounted payoff h(tau, X_tau) of every path, where tau is the first
/// date after the path's start at which the maps say stop (maturity at
/// the latest). `paths` must start at date index `from_index`.
std::vector<double> stopped_payoffs(const PathArray& paths, const DecisionMapSequence& maps,
                                    std::size_t from_index, const MaxCallPayoff& payoff);

/// Single-path form of stopped_payoffs.
double pathwise_stop(const PathArray& path, const DecisionMapSequence& maps,
                     std::size_t from_index, const MaxCallPayoff& payoff);

/// Mean stopped payoff over R fresh paths started from (t_i, x).
double estimate_continuation(std::span<const double> x, std::size_t i,
                             const DecisionMapSequence& maps, const GbmModel& model,
                             const MaxCallPayoff& payoff, std::size_t paths, Rng& rng);

struct MapTrainingConfig {
    Box domain;
    DesignKind design = DesignKind::uniform_grid;
    std::size_t m = 1024;
    /// Inner paths per design point.
    std::size_t r = 100;
    std::vector<std::size_t> hidden{64, 64};
    nn::TrainConfig train;
    std::uint64_t seed = 0;
};

/// Defaults for a d-asset problem: d = 2 uses a 32 x 32 uniform grid on
/// [50, 150]^2, d >= 3 uses 1024 * d LHS points on [30, 180]^d; R = 100.
MapTrainingConfig default_map_training(std::size_t d, std::uint64_t seed);

/// Backward induction over dates N-1..1. At date i every design point is
/// labeled continue when its estimated continuation value exceeds h(t_i, x)
/// and stop otherwise, then a classifier is fitted to those labels. Design
/// point p at date i simulates from substream (seed, i, p + 1). A date
/// whose labels are all one class gets a constant map.
DecisionMapSequence train_decision_maps(const GbmModel& model, const ExerciseSchedule& schedule,
                                        const MaxCallPayoff& payoff, const MapTrainingConfig& config);

struct PriceEstimate {
    double price = 0.0;
    /// Standard deviation of the repetition means.
    double std_dev = 0.0;
    /// std_dev / sqrt(repetitions).
    double std_error = 0.0;
    std::size_t paths = 0;
    std::size_t repetitions = 0;
    std::uint64_t seed = 0;
    std::vector<double> repetition_means;
};

/// Out-of-sample price: repetition k simulates `paths` paths from x0 in
/// blocks of 4096, block b drawing from substream (seed, k, b). Returns
/// max(h(0, x0), mean of the repetition means).
PriceEstimate price(const GbmModel& model, const ExerciseSchedule& schedule,
                    const MaxCallPayoff& payoff, const DecisionMapSequence& maps,
                    std::size_t paths, std::size_t repetitions, std::uint64_t seed);

/// Persists the sequence as a directory: manifest.txt (key=value) plus
/// map_<i>.net for every network map.
void save_decision_maps(const DecisionMapSequence& maps, const std::filesystem::path& dir);
DecisionMapSequence load_decision_maps(const std::filesystem::path& dir);

/// CSV "x1,x2,p_continue" on an n x n grid over the first two coordinates
/// of the domain; remaining coordinates are held at `anchor`.
void write_decision_map_csv(const DecisionMap& map, const Box& domain,
                            std::span<const double> anchor, std::size_t n, std::ostream& out);

}  // namespace surfrank
