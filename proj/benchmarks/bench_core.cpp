#include <benchmark/benchmark.h>

#include "surfrank/bermudan.hpp"
#include "surfrank/lattice.hpp"
#include "surfrank/nn/network.hpp"

using namespace surfrank;

namespace {

nn::Tensor random_batch(std::vector<std::size_t> shape, std::uint64_t seed) {
    nn::Tensor t(std::move(shape));
    Rng rng(seed);
    for (auto& v : t.values()) v = 2.0 * rng.uniform() - 1.0;
    return t;
}

void BM_FeedForwardForward(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto net = nn::init_network(nn::build_feedforward(2, 5, {64, 64, 64, 64}), 1);
    const auto batch = random_batch({rows, 2}, 2);
    for (auto _ : state) benchmark::DoNotOptimize(nn::forward(net, batch));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}
BENCHMARK(BM_FeedForwardForward)->Arg(288)->Arg(4096);

void BM_FeedForwardBackward(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto net = nn::init_network(nn::build_feedforward(10, 3, {64, 64, 64}), 1);
    const auto batch = random_batch({rows, 10}, 3);
    std::vector<Label> labels;
    for (std::size_t i = 0; i < rows; ++i) labels.emplace_back(1 + static_cast<int>(i % 3));
    for (auto _ : state) benchmark::DoNotOptimize(nn::backward(net, batch, labels));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}
BENCHMARK(BM_FeedForwardBackward)->Arg(256);

void BM_UNetBackward(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    const auto net = nn::init_network(nn::build_unet(side, side, 2, 5, 16), 1);
    const auto batch = random_batch({1, side, side, 2}, 4);
    std::vector<Label> labels;
    for (std::size_t i = 0; i < side * side; ++i) labels.emplace_back(1 + static_cast<int>(i % 5));
    for (auto _ : state) benchmark::DoNotOptimize(nn::backward(net, batch, labels));
}
BENCHMARK(BM_UNetBackward)->Arg(24);

void BM_SimulatePaths(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto model = reference_model(d, 100.0);
    for (auto _ : state) {
        Rng rng(5);
        benchmark::DoNotOptimize(simulate_paths(model, model.x0, 0, reference_schedule(), 4096, rng));
    }
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_SimulatePaths)->Arg(2)->Arg(5);

void BM_Lattice(benchmark::State& state) {
    LatticeParams p;
    p.steps_per_interval = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lattice_price(p));
}
BENCHMARK(BM_Lattice)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
