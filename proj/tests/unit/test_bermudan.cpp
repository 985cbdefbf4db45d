#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "surfrank/bermudan.hpp"

using namespace surfrank;

namespace {

DecisionMapSequence constant_maps(Label decision, std::size_t d = 2) {
    DecisionMapSequence seq;
    seq.schedule = reference_schedule();
    seq.domain = Box::cube(d, 50, 150);
    seq.maps.assign(seq.schedule.dates - 1, DecisionMap::constant(decision));
    return seq;
}

MapTrainingConfig small_training(std::uint64_t seed) {
    auto cfg = default_map_training(2, seed);
    cfg.m = 256;
    cfg.r = 40;
    cfg.hidden = {16, 16};
    cfg.train.epochs = 40;
    cfg.train.batch_size = 64;
    return cfg;
}

const DecisionMapSequence& trained_maps() {
    static const DecisionMapSequence maps = train_decision_maps(
        reference_model(2, 90), reference_schedule(), reference_payoff(), small_training(21));
    return maps;
}

}  // namespace

TEST(Model, Validation) {
    EXPECT_NO_THROW(reference_model(5, 100).validate());
    GbmModel m = reference_model(2, 90);
    m.volatility = 0.0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = reference_model(2, 90);
    m.x0[1] = -1.0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    ExerciseSchedule s;
    s.dates = 0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    EXPECT_DOUBLE_EQ(reference_schedule().time(9), 3.0);
}

TEST(Payoff, DiscountedMaxCall) {
    const auto h = reference_payoff();
    const std::vector<double> x{90.0, 120.0};
    EXPECT_DOUBLE_EQ(h(0.0, x), 20.0);
    EXPECT_DOUBLE_EQ(h(1.0, x), 20.0 * std::exp(-0.05));
    EXPECT_EQ(h(0.5, std::vector<double>{90.0, 99.0}), 0.0);
    // Nonincreasing in t for fixed x.
    for (double t = 0.0; t < 3.0; t += 0.25) EXPECT_GE(h(t, x), h(t + 0.25, x));
}

TEST(Paths, LognormalMeanAtMaturity) {
    const auto model = reference_model(2, 90);
    const auto schedule = reference_schedule();
    Rng rng(1);
    const std::size_t n = 100000;
    const auto paths = simulate_paths(model, model.x0, 0, schedule, n, rng);
    ASSERT_EQ(paths.dates, 10u);
    double s = 0.0, s2 = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const double v = paths.at(p, 9)[0];
        s += v;
        s2 += v * v;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, 90.0 * std::exp((0.05 - 0.10) * 3.0), 3.0 * se);
}

TEST(Paths, LogReturnMomentsPerStep) {
    const auto model = reference_model(3, 100);
    const auto schedule = reference_schedule();
    Rng rng(2);
    const std::size_t n = 40000;
    const auto paths = simulate_paths(model, model.x0, 0, schedule, n, rng);
    const double dt = schedule.step();
    double s = 0.0, s2 = 0.0;
    std::size_t count = 0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t a = 0; a < 3; ++a) {
                const double lr = std::log(paths.at(p, i + 1)[a] / paths.at(p, i)[a]);
                s += lr;
                s2 += lr * lr;
                ++count;
            }
    const double mean = s / count;
    const double var = s2 / count - mean * mean;
    EXPECT_NEAR(mean, (0.05 - 0.10 - 0.02) * dt, 4.0 * 0.2 * std::sqrt(dt / count));
    EXPECT_NEAR(var, 0.04 * dt, 0.02 * 0.04 * dt);
}

TEST(Paths, VanishingVolatilityIsDeterministic) {
    auto model = reference_model(2, 90);
    model.volatility = 1e-12;
    const auto schedule = reference_schedule();
    Rng rng(3);
    const auto paths = simulate_paths(model, model.x0, 0, schedule, 5, rng);
    for (std::size_t p = 0; p < 5; ++p)
        for (std::size_t i = 0; i <= 9; ++i)
            EXPECT_NEAR(paths.at(p, i)[1], 90.0 * std::exp(-0.05 * schedule.time(i)), 1e-9);
}

TEST(Paths, StartFromLaterDate) {
    const auto model = reference_model(2, 90);
    Rng rng(4);
    const std::vector<double> start{120.0, 80.0};
    const auto paths = simulate_paths(model, start, 6, reference_schedule(), 3, rng);
    EXPECT_EQ(paths.dates, 4u);
    EXPECT_EQ(paths.at(2, 0)[0], 120.0);
    EXPECT_THROW(simulate_paths(model, start, 10, reference_schedule(), 3, rng), std::invalid_argument);
}

TEST(Stopping, ConstantMaps) {
    const auto model = reference_model(2, 100);
    const auto h = reference_payoff();
    Rng rng(5);
    const auto paths = simulate_paths(model, model.x0, 3, reference_schedule(), 200, rng);
    const auto stop = stopped_payoffs(paths, constant_maps(kStop), 3, h);
    const auto cont = stopped_payoffs(paths, constant_maps(kContinue), 3, h);
    const auto schedule = reference_schedule();
    for (std::size_t p = 0; p < 200; ++p) {
        EXPECT_EQ(stop[p], h(schedule.time(4), paths.at(p, 1)));
        EXPECT_EQ(cont[p], h(schedule.time(9), paths.at(p, 6)));
    }
    PathArray one{1, paths.dates, 2, std::vector<double>(paths.values.begin(), paths.values.begin() + 2 * paths.dates)};
    EXPECT_EQ(pathwise_stop(one, constant_maps(kContinue), 3, h), cont[0]);
}

TEST(Stopping, MapAtMaturityAlwaysStops) {
    const auto seq = constant_maps(kContinue);
    EXPECT_EQ(seq.at(9).kind(), DecisionMap::Kind::always_stop);
    EXPECT_EQ(seq.at(4).kind(), DecisionMap::Kind::always_continue);
    EXPECT_THROW(seq.at(0), std::out_of_range);
    EXPECT_THROW(seq.at(10), std::out_of_range);
}

TEST(Continuation, DeepOutOfTheMoneyIsNearZero) {
    const auto model = reference_model(2, 90);
    Rng rng(6);
    const std::vector<double> x{30.0, 30.0};
    EXPECT_LT(estimate_continuation(x, 8, constant_maps(kStop), model, reference_payoff(), 10000, rng), 1e-3);
}

TEST(Continuation, LastStepMatchesEuropeanOracle) {
    const auto model = reference_model(2, 90);
    const auto schedule = reference_schedule();
    const std::vector<double> x{100.0, 95.0};
    Rng rng(7);
    const std::size_t r = 200000;
    const double est = estimate_continuation(x, 8, constant_maps(kStop), model, reference_payoff(), r, rng);
    const double dt = schedule.step();
    const auto ref = oracle::european_max_call(x, 0.05, 0.10, 0.2, dt, 100.0, 1000000, 99);
    const double disc = std::exp(-0.05 * schedule.time(8));
    // Standard error of the library estimate is about sqrt(1e6 / r) times the oracle's.
    const double se = disc * ref.stderr_ * std::sqrt(1.0 + 1e6 / double(r));
    EXPECT_NEAR(est, disc * ref.mean, 3.0 * se);
}

TEST(Training, MapsAreSymmetricAndRecordMetadata) {
    const auto& maps = trained_maps();
    ASSERT_EQ(maps.maps.size(), 8u);
    EXPECT_TRUE(maps.metadata.contains("date_1_continue"));
    // Well inside the money near maturity: stop. Far out of the money: continue.
    const auto& late = maps.at(8);
    const std::vector<double> pts{145.0, 60.0, 55.0, 55.0};
    const auto p = late.continue_probability(pts, 2);
    EXPECT_LT(p[0], 0.5);
    EXPECT_GE(p[1], 0.5);
}

TEST(Training, Deterministic) {
    auto cfg = small_training(33);
    cfg.m = 64;
    cfg.train.epochs = 5;
    const auto a = train_decision_maps(reference_model(2, 90), reference_schedule(), reference_payoff(), cfg);
    const auto b = train_decision_maps(reference_model(2, 90), reference_schedule(), reference_payoff(), cfg);
    ASSERT_EQ(a.maps.size(), b.maps.size());
    for (std::size_t i = 0; i < a.maps.size(); ++i) {
        EXPECT_EQ(a.maps[i].kind(), b.maps[i].kind());
        EXPECT_EQ(a.maps[i].network(), b.maps[i].network());
    }
    EXPECT_EQ(a.metadata.entries(), b.metadata.entries());
}

TEST(Pricing, DeterministicAndConsistent) {
    const auto model = reference_model(2, 90);
    const auto& maps = trained_maps();
    const auto a = price(model, reference_schedule(), reference_payoff(), maps, 5000, 4, 11);
    const auto b = price(model, reference_schedule(), reference_payoff(), maps, 5000, 4, 11);
    EXPECT_EQ(a.price, b.price);
    EXPECT_EQ(a.repetition_means, b.repetition_means);
    ASSERT_EQ(a.repetition_means.size(), 4u);
    EXPECT_GE(a.std_error, 0.0);
    EXPECT_NEAR(a.std_error, a.std_dev / 2.0, 1e-15);
    EXPECT_GT(a.price, 7.0);
    EXPECT_LT(a.price, 8.5);
}

TEST(Pricing, NeverBelowImmediateExercise) {
    const auto model = reference_model(2, 160);
    const auto est = price(model, reference_schedule(), reference_payoff(), constant_maps(kContinue), 2000, 2, 3);
    EXPECT_GE(est.price, 60.0);
}

TEST(Pricing, AllContinueEqualsEuropean) {
    const auto model = reference_model(2, 90);
    const auto est = price(model, reference_schedule(), reference_payoff(), constant_maps(kContinue), 50000, 4, 8);
    const auto ref = oracle::european_max_call(model.x0, 0.05, 0.10, 0.2, 3.0, 100.0, 1000000, 5);
    EXPECT_NEAR(est.price, ref.mean, 3.0 * std::hypot(est.std_error, ref.stderr_));
}

TEST(BermudanProperty, MonotoneInInitialPrice) {
    const auto& maps = trained_maps();
    double prev = -1.0;
    for (double x0 : {70.0, 80.0, 90.0, 100.0, 110.0, 120.0}) {
        const auto est = price(reference_model(2, x0), reference_schedule(), reference_payoff(), maps, 20000, 2, 4);
        EXPECT_GT(est.price, prev) << "x0 = " << x0;
        prev = est.price;
    }
}

TEST(Persistence, SaveLoadRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "surfrank_maps_rt";
    std::filesystem::remove_all(dir);
    const auto& maps = trained_maps();
    save_decision_maps(maps, dir);
    const auto back = load_decision_maps(dir);
    ASSERT_EQ(back.maps.size(), maps.maps.size());
    for (std::size_t i = 0; i < maps.maps.size(); ++i) {
        EXPECT_EQ(back.maps[i].kind(), maps.maps[i].kind());
        EXPECT_EQ(back.maps[i].network(), maps.maps[i].network());
    }
    const auto model = reference_model(2, 90);
    EXPECT_EQ(price(model, reference_schedule(), reference_payoff(), back, 3000, 2, 1).price,
              price(model, reference_schedule(), reference_payoff(), maps, 3000, 2, 1).price);
    EXPECT_THROW(load_decision_maps(dir / "missing"), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST(Export, DecisionMapCsv) {
    std::ostringstream out;
    const std::vector<double> anchor{90.0, 90.0};
    write_decision_map_csv(trained_maps().at(5), trained_maps().domain, anchor, 11, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x1,x2,p_continue");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 121u);
}
