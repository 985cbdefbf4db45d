#pragma once

// Reference computations written independently of the library, used as
// test oracles.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double mu1_1d(double x) {
    return 0.625 * (std::sin(10.0 * x) / (1.0 + x) + 2.0 * std::pow(x, 3) * std::cos(5.0 * x) + 0.841);
}

inline double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Hartmann 6-D on [0,1]^6, standard coefficients.
inline double hartmann6(const double* u) {
    const double alpha[4] = {1.0, 1.2, 3.0, 3.2};
    const double a[4][6] = {{10, 3, 17, 3.5, 1.7, 8},
                            {0.05, 10, 17, 0.1, 8, 14},
                            {3, 3.5, 1.7, 10, 17, 8},
                            {17, 8, 0.05, 10, 0.1, 14}};
    const double p[4][6] = {{1312, 1696, 5569, 124, 8283, 5886},
                            {2329, 4135, 8307, 3736, 1004, 9991},
                            {2348, 1451, 3522, 2883, 3047, 6650},
                            {4047, 8828, 8732, 5743, 1091, 381}};
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        double e = 0.0;
        for (int j = 0; j < 6; ++j) e += a[i][j] * std::pow(u[j] - p[i][j] * 1e-4, 2);
        s += alpha[i] * std::exp(-e);
    }
    return -s;
}

struct McResult {
    double mean;
    double stderr_;
};

// Plain Monte Carlo of exp(-rT) E[(max_i X_i(T) - K)_+] for independent GBMs
// sampled in a single step.
inline McResult european_max_call(const std::vector<double>& x0, double r, double delta, double sigma,
                                  double t, double k, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z;
    const double drift = (r - delta - 0.5 * sigma * sigma) * t;
    const double vol = sigma * std::sqrt(t);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = 0.0;
        for (double x : x0) best = std::max(best, x * std::exp(drift + vol * z(gen)));
        const double v = std::exp(-r * t) * std::max(best - k, 0.0);
        s += v;
        s2 += v * v;
    }
    const double mean = s / static_cast<double>(n);
    const double var = s2 / static_cast<double>(n) - mean * mean;
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace oracle
