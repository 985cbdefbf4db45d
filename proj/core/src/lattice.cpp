#include "surfrank/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "surfrank/kv.hpp"

namespace surfrank {

namespace {

double up_probability(const GbmModel& m, double dt) {
    const double nu = m.rate - m.dividend - 0.5 * m.volatility * m.volatility;
    return 0.5 + 0.5 * nu * std::sqrt(dt) / m.volatility;
}

double raw_lattice(const LatticeParams& params, std::size_t n) {
    const auto& m = params.model;
    const std::size_t total = params.schedule.dates * n;
    const double dt = params.schedule.maturity / static_cast<double>(total);
    const double step = m.volatility * std::sqrt(dt);
    const double p = up_probability(m, dt);
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("lattice branch probability " + std::to_string(p) +
                                    " outside (0, 1); use more steps per interval");
    const double q = 1.0 - p;
    const double puu = p * p, pud = p * q, pdd = q * q;

    // Level s holds (s+1)^2 nodes; node (a, b) has a and b up-moves.
    auto price_at = [&](std::size_t s, std::size_t a, std::size_t b) {
        const double shift = static_cast<double>(s);
        const std::array<double, 2> x{m.x0[0] * std::exp(step * (2.0 * static_cast<double>(a) - shift)),
                                      m.x0[1] * std::exp(step * (2.0 * static_cast<double>(b) - shift))};
        return params.payoff(dt * shift, x);
    };

    std::vector<double> v((total + 1) * (total + 1));
    std::vector<double> next(v.size());
    {
        const std::size_t w = total + 1;
        for (std::size_t a = 0; a <= total; ++a)
            for (std::size_t b = 0; b <= total; ++b) v[a * w + b] = price_at(total, a, b);
    }
    for (std::size_t s = total; s-- > 0;) {
        const std::size_t wn = s + 2;
        const std::size_t w = s + 1;
        const bool exercise = !params.european_only && s > 0 && s % n == 0;
        for (std::size_t a = 0; a <= s; ++a) {
            for (std::size_t b = 0; b <= s; ++b) {
                const double cont = pdd * v[a * wn + b] + pud * (v[a * wn + b + 1] + v[(a + 1) * wn + b]) +
                                    puu * v[(a + 1) * wn + b + 1];
                next[a * w + b] = exercise ? std::max(cont, price_at(s, a, b)) : cont;
            }
        }
        std::swap(v, next);
    }
    return std::max(v[0], params.european_only ? 0.0 : params.payoff(0.0, m.x0));
}

}  // namespace

void LatticeParams::validate() const {
    model.validate();
    schedule.validate();
    if (model.dimension() != 2) throw std::invalid_argument("the lattice handles exactly two assets");
    if (steps_per_interval == 0) throw std::invalid_argument("steps per interval must be positive");
    const double dt = schedule.step() / static_cast<double>(steps_per_interval);
    const double p = up_probability(model, dt);
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("lattice branch probability " + std::to_string(p) +
                                    " outside (0, 1); use more steps per interval");
}

double lattice_price(const LatticeParams& params) {
    params.validate();
    const double p = raw_lattice(params, params.steps_per_interval);
    if (!params.average_adjacent) return p;
    return 0.5 * (p + raw_lattice(params, params.steps_per_interval + 1));
}

std::vector<ConvergenceRow> convergence_table(const LatticeParams& params,
                                              const std::vector<std::size_t>& steps) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(steps.size());
    for (auto n : steps) {
        LatticeParams p = params;
        p.steps_per_interval = n;
        p.validate();
        const double raw = raw_lattice(p, n);
        const double avg = p.average_adjacent ? 0.5 * (raw + raw_lattice(p, n + 1)) : raw;
        rows.push_back(ConvergenceRow{n, avg, raw});
    }
    return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
    out << "n,price,raw_price\n";
    for (const auto& r : rows)
        out << r.steps_per_interval << ',' << format_double(r.price) << ',' << format_double(r.raw_price) << '\n';
}

}  // namespace surfrank
