#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "surfrank/rng.hpp"
#include "surfrank/types.hpp"

namespace surfrank {

using SurfaceFn = std::function<double(std::span<const double>)>;

/// A family of L response surfaces mu_l over a box, each observed through a
/// sampler Y_l(x) = mu_l(x) + sigma_l * Z with Z standard normal.
///
/// Evaluation is pure and may be called concurrently. Sampling takes the
/// generator explicitly; use one generator per worker.
class SurfaceSet {
public:
    SurfaceSet(std::string name, Box domain, std::vector<SurfaceFn> surfaces,
               std::vector<double> noise_sd);

    const std::string& name() const { return name_; }
    std::size_t dimension() const { return domain_.dimension(); }
    std::size_t count() const { return surfaces_.size(); }
    const Box& domain() const { return domain_; }
    const std::vector<double>& noise_sd() const { return noise_sd_; }

    /// Same surfaces, different per-surface noise levels.
    SurfaceSet with_noise(std::vector<double> noise_sd) const;

    /// mu_l(x). Throws std::domain_error for an invalid label or a point
    /// outside the domain box, or if the surface is not finite there.
    double eval(Label l, std::span<const double> x) const;

    /// mu_l(x) + sigma_l * Z, one normal draw from rng.
    double sample(Label l, std::span<const double> x, Rng& rng) const;

    /// argmin_l mu_l(x); ties go to the smallest index.
    Label true_label(std::span<const double> x) const;

    /// argmin_l Y_l(x) with one fresh draw per surface; ties go to the
    /// smallest index.
    Label noisy_label(std::span<const double> x, Rng& rng) const;

private:
    void check(Label l, std::span<const double> x) const;

    std::string name_;
    Box domain_;
    std::vector<SurfaceFn> surfaces_;
    std::vector<double> noise_sd_;
};

/// Probability weights over an ordered list of points (the measure used by
/// the mislabeling loss). Weights are non-negative and sum to one.
struct EvalGrid {
    PointSet points;
    std::vector<double> weights;

    static EvalGrid uniform(PointSet points);
    void validate() const;
};

/// Weighted fraction of grid points where the two labelings disagree.
/// With uniform weights this equals 1 - accuracy.
double ranking_loss(std::span<const Label> predicted, std::span<const Label> truth,
                    const EvalGrid& grid);

/// L = 2 on [0, 1]: a damped-oscillation surface against the constant 0.5,
/// noise (0.2, 0.1).
SurfaceSet make_1d_example();

/// L = 5 quadratic/sinusoidal surfaces on [-2, 2]^2, noise 0.5 each.
SurfaceSet make_2d_example();

struct TenDOptions {
    /// Per-surface noise; zero noise when empty.
    std::vector<double> noise_sd;
    /// Exponent of the (x_i - 1) terms in the Trid surface. The default is
    /// the dimension (10); 2 gives the classical Trid function.
    int trid_exponent = 10;
};

/// L = 3 on [-1, 1]^10: Hartmann-6 on the first six coordinates (mapped
/// onto [0, 1]^6), rescaled Styblinski-Tang and rescaled Trid.
SurfaceSet make_10d_example(const TenDOptions& options = {});

namespace detail {
/// Hartmann 6-D on its native domain [0, 1]^6.
double hartmann6(std::span<const double> u);
}  // namespace detail

}  // namespace surfrank
