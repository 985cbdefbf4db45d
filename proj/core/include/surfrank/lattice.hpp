#pragma once

#include <iosfwd>
#include <vector>

#include "surfrank/bermudan.hpp"

namespace surfrank {

/// Two-asset recombining binomial lattice for the max-call. Each step moves
/// every log-price by +-sigma*sqrt(dt) independently, with the up
/// probability 1/2 + (r - delta - sigma^2/2) sqrt(dt) / (2 sigma) matching
/// the drift of the log-price. Exercise is compared only at the schedule's
/// dates; between them the value is a plain expectation (the payoff is
/// already discounted to time zero).
struct LatticeParams {
    GbmModel model = reference_model(2, 90.0);
    ExerciseSchedule schedule = reference_schedule();
    MaxCallPayoff payoff = reference_payoff();
    std::size_t steps_per_interval = 100;
    /// Exercise only at maturity.
    bool european_only = false;
    /// Report the mean of the n and n+1 step prices, which cancels most of
    /// the odd/even oscillation of the lattice.
    bool average_adjacent = true;

    /// Throws std::invalid_argument for d != 2, n = 0 or branch
    /// probabilities outside (0, 1).
    void validate() const;
};

double lattice_price(const LatticeParams& params);

struct ConvergenceRow {
    std::size_t steps_per_interval = 0;
    /// Price as configured (averaged when average_adjacent is set).
    double price = 0.0;
    /// Price of the n-step lattice alone.
    double raw_price = 0.0;
};

std::vector<ConvergenceRow> convergence_table(const LatticeParams& params,
                                              const std::vector<std::size_t>& steps);

/// CSV "n,price,raw_price".
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);

}  // namespace surfrank
