#include "surfrank/surfaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace surfrank {

SurfaceSet::SurfaceSet(std::string name, Box domain, std::vector<SurfaceFn> surfaces,
                       std::vector<double> noise_sd)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      surfaces_(std::move(surfaces)),
      noise_sd_(std::move(noise_sd)) {
    if (surfaces_.size() < 2) throw std::invalid_argument("a surface set needs at least two surfaces");
    if (noise_sd_.size() != surfaces_.size())
        throw std::invalid_argument("noise_sd must have one entry per surface");
    for (double s : noise_sd_)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw std::invalid_argument("noise levels must be finite and non-negative");
}

SurfaceSet SurfaceSet::with_noise(std::vector<double> noise_sd) const {
    return SurfaceSet(name_, domain_, surfaces_, std::move(noise_sd));
}

void SurfaceSet::check(Label l, std::span<const double> x) const {
    if (l.value < 1 || static_cast<std::size_t>(l.value) > count())
        throw std::domain_error("surface label " + std::to_string(l.value) + " out of range");
    if (!domain_.contains(x)) throw std::domain_error("point outside the surface domain");
}

double SurfaceSet::eval(Label l, std::span<const double> x) const {
    check(l, x);
    const double v = surfaces_[l.index()](x);
    if (!std::isfinite(v)) throw std::domain_error("surface is not finite at the given point");
    return v;
}

double SurfaceSet::sample(Label l, std::span<const double> x, Rng& rng) const {
    const double mu = eval(l, x);
    return mu + noise_sd_[l.index()] * rng.normal();
}

Label SurfaceSet::true_label(std::span<const double> x) const {
    Label best{1};
    double best_value = eval(best, x);
    for (int l = 2; l <= static_cast<int>(count()); ++l) {
        const double v = eval(Label{l}, x);
        if (v < best_value) {
            best_value = v;
            best = Label{l};
        }
    }
    return best;
}

Label SurfaceSet::noisy_label(std::span<const double> x, Rng& rng) const {
    Label best{1};
    double best_value = sample(best, x, rng);
    for (int l = 2; l <= static_cast<int>(count()); ++l) {
        const double v = sample(Label{l}, x, rng);
        if (v < best_value) {
            best_value = v;
            best = Label{l};
        }
    }
    return best;
}

EvalGrid EvalGrid::uniform(PointSet points) {
    EvalGrid g;
    const auto n = points.size();
    if (n == 0) throw std::invalid_argument("evaluation grid is empty");
    g.weights.assign(n, 1.0 / static_cast<double>(n));
    g.points = std::move(points);
    return g;
}

void EvalGrid::validate() const {
    if (weights.size() != points.size())
        throw std::invalid_argument("evaluation grid needs one weight per point");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("evaluation weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("evaluation weights must sum to 1");
}

double ranking_loss(std::span<const Label> predicted, std::span<const Label> truth,
                    const EvalGrid& grid) {
    grid.validate();
    if (predicted.size() != grid.weights.size() || truth.size() != grid.weights.size())
        throw std::invalid_argument("labelings must cover every grid point");
    double loss = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] != truth[i]) loss += grid.weights[i];
    return std::min(1.0, std::max(0.0, loss));
}

SurfaceSet make_1d_example() {
    auto mu1 = [](std::span<const double> x) {
        const double v = x[0];
        return 5.0 / 8.0 *
               (std::sin(10.0 * v) / (1.0 + v) + 2.0 * v * v * v * std::cos(5.0 * v) + 0.841);
    };
    auto mu2 = [](std::span<const double>) { return 0.5; };
    return SurfaceSet("1d", Box::cube(1, 0.0, 1.0), {mu1, mu2}, {0.2, 0.1});
}

SurfaceSet make_2d_example() {
    std::vector<SurfaceFn> mu{
        [](std::span<const double> x) { return 2.0 - x[0] * x[0] - 0.5 * x[1] * x[1]; },
        [](std::span<const double> x) {
            return 2.0 * (x[0] - 1.0) * (x[0] - 1.0) + 2.0 * x[1] * x[1] - 2.0;
        },
        [](std::span<const double> x) { return 2.0 * std::sin(2.0 * x[0]) + 2.0; },
        [](std::span<const double> x) {
            return 8.0 * (x[0] - 1.0) * (x[0] - 1.0) + 8.0 * x[1] * x[1] - 3.0;
        },
        [](std::span<const double> x) {
            return 0.5 * (x[0] + 3.0) * (x[0] + 3.0) + 16.0 * x[1] * x[1] - 6.0;
        },
    };
    return SurfaceSet("2d", Box::cube(2, -2.0, 2.0), std::move(mu), std::vector<double>(5, 0.5));
}

namespace detail {

double hartmann6(std::span<const double> u) {
    static constexpr std::array<double, 4> alpha{1.0, 1.2, 3.0, 3.2};
    static constexpr std::array<std::array<double, 6>, 4> A{{
        {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
        {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
        {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
        {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
    }};
    static constexpr std::array<std::array<double, 6>, 4> P{{
        {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
        {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
        {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
        {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
    }};
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < 6; ++j) {
            const double d = u[j] - P[i][j];
            inner += A[i][j] * d * d;
        }
        total += alpha[i] * std::exp(-inner);
    }
    return -total;
}

}  // namespace detail

SurfaceSet make_10d_example(const TenDOptions& options) {
    constexpr std::size_t d = 10;
    std::vector<double> noise = options.noise_sd.empty() ? std::vector<double>(3, 0.0) : options.noise_sd;
    if (noise.size() != 3) throw std::invalid_argument("the 10-D example takes exactly 3 noise levels");
    if (options.trid_exponent < 1) throw std::invalid_argument("Trid exponent must be positive");

    auto hartmann = [](std::span<const double> x) {
        std::array<double, 6> u{};
        for (std::size_t j = 0; j < 6; ++j) u[j] = 0.5 * (x[j] + 1.0);
        return detail::hartmann6(u);
    };
    auto styblinski_tang = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) {
            const double v2 = v * v;
            s += 625.0 * v2 * v2 - 400.0 * v2 + 25.0 * v;
        }
        return s / (2.0 * static_cast<double>(x.size()));
    };
    const int p = options.trid_exponent;
    auto trid = [p](std::span<const double> x) {
        double power_sum = 0.0;
        for (double v : x) power_sum += std::pow(v - 1.0, p);
        double cross = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) cross += x[i] * x[i - 1];
        return 0.5 * (power_sum - cross) - 5.0;
    };
    return SurfaceSet("10d", Box::cube(d, -1.0, 1.0), {hartmann, styblinski_tang, trid},
                      std::move(noise));
}

}  // namespace surfrank
