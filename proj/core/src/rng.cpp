#include "surfrank/rng.hpp"

#include <vector>

namespace surfrank {

namespace {

void push_words(std::vector<std::uint32_t>& words, std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng::Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream_keys) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * (stream_keys.size() + 2));
    push_words(words, seed);
    push_words(words, stream_keys.size());
    for (auto k : stream_keys) push_words(words, k);
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (key + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace surfrank
