#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace surfrank {

/// Seeded random source used everywhere a draw is needed.
///
/// Wraps a 64-bit Mersenne twister together with the normal and uniform
/// samplers. The normal sampler caches its second variate, so that cache is
/// part of the generator state: copying an Rng and drawing from both copies
/// yields identical sequences.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0);

    /// Independent substream keyed by (seed, keys...). Used to give every
    /// design point, path batch or repetition its own stream, so results do
    /// not depend on how work is scheduled across threads.
    Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream_keys);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Deterministic 64-bit mix of a seed and a key (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key);

}  // namespace surfrank
