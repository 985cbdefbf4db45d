#include "surfrank/bermudan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "surfrank/nn/serialize.hpp"
#include "surfrank/parallel.hpp"

namespace surfrank {

void GbmModel::validate() const {
    if (x0.empty()) throw std::invalid_argument("the model needs at least one asset");
    if (!(volatility > 0.0) || !std::isfinite(volatility))
        throw std::invalid_argument("volatility must be positive");
    if (!std::isfinite(rate) || !std::isfinite(dividend))
        throw std::invalid_argument("rate and dividend must be finite");
    for (double v : x0)
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("initial prices must be positive");
}

void ExerciseSchedule::validate() const {
    if (dates == 0) throw std::invalid_argument("the schedule needs at least one exercise date");
    if (!(maturity > 0.0) || !std::isfinite(maturity))
        throw std::invalid_argument("maturity must be positive");
}

double MaxCallPayoff::operator()(double t, std::span<const double> x) const {
    const double best = *std::max_element(x.begin(), x.end());
    return best > strike ? std::exp(-rate * t) * (best - strike) : 0.0;
}

GbmModel reference_model(std::size_t d, double x0) {
    GbmModel m;
    m.x0.assign(d, x0);
    m.validate();
    return m;
}

ExerciseSchedule reference_schedule() { return ExerciseSchedule{}; }

MaxCallPayoff reference_payoff() { return MaxCallPayoff{}; }

PathArray simulate_paths(const GbmModel& model, std::span<const double> start,
                         std::size_t from_index, const ExerciseSchedule& schedule,
                         std::size_t count, Rng& rng) {
    const std::size_t d = model.dimension();
    if (start.size() != d) throw std::invalid_argument("start point has the wrong dimension");
    if (from_index > schedule.dates) throw std::invalid_argument("start date beyond maturity");
    for (double v : start)
        if (!(v > 0.0)) throw std::invalid_argument("start prices must be positive");

    const double dt = schedule.step();
    const double drift = (model.rate - model.dividend - 0.5 * model.volatility * model.volatility) * dt;
    const double vol = model.volatility * std::sqrt(dt);

    PathArray p;
    p.paths = count;
    p.dates = schedule.dates - from_index + 1;
    p.dim = d;
    p.values.resize(count * p.dates * d);
    for (std::size_t r = 0; r < count; ++r) {
        double* row = p.values.data() + r * p.dates * d;
        std::copy(start.begin(), start.end(), row);
        for (std::size_t j = 1; j < p.dates; ++j)
            for (std::size_t k = 0; k < d; ++k)
                row[j * d + k] = row[(j - 1) * d + k] * std::exp(drift + vol * rng.normal());
    }
    return p;
}

DecisionMap DecisionMap::constant(Label decision) {
    DecisionMap m;
    m.kind_ = decision == kStop ? Kind::always_stop : Kind::always_continue;
    return m;
}

DecisionMap::DecisionMap(nn::Network net, Box domain)
    : kind_(Kind::network), net_(std::move(net)), domain_(std::move(domain)) {
    if (net_.input_shape() != std::vector<std::size_t>{domain_.dimension()} || net_.classes() != 2)
        throw std::invalid_argument("decision map network must take d inputs and separate two classes");
}

std::vector<double> DecisionMap::continue_probability(std::span<const double> points,
                                                      std::size_t count) const {
    if (kind_ != Kind::network) return std::vector<double>(count, kind_ == Kind::always_continue ? 1.0 : 0.0);
    const std::size_t d = domain_.dimension();
    if (points.size() != count * d) throw std::invalid_argument("point block has the wrong size");
    std::vector<double> prob(count);
    constexpr std::size_t chunk = 4096;
    for (std::size_t first = 0; first < count; first += chunk) {
        const std::size_t n = std::min(chunk, count - first);
        nn::Tensor x({n, d});
        for (std::size_t r = 0; r < n; ++r)
            domain_.to_unit(points.subspan((first + r) * d, d), std::span<double>(x.data() + r * d, d));
        const nn::Tensor out = nn::forward(net_, x);
        std::copy_n(out.data(), n, prob.begin() + static_cast<std::ptrdiff_t>(first));
    }
    return prob;
}

std::vector<bool> DecisionMap::stops(std::span<const double> points, std::size_t count) const {
    const auto p = continue_probability(points, count);
    std::vector<bool> s(count);
    for (std::size_t i = 0; i < count; ++i) s[i] = p[i] < 0.5;
    return s;
}

std::string_view to_string(DecisionMap::Kind kind) {
    switch (kind) {
        case DecisionMap::Kind::network: return "network";
        case DecisionMap::Kind::always_stop: return "stop";
        case DecisionMap::Kind::always_continue: return "continue";
    }
    return "unknown";
}

const DecisionMap& DecisionMapSequence::at(std::size_t i) const {
    static const DecisionMap stop = DecisionMap::constant(kStop);
    if (i == 0 || i > schedule.dates) throw std::out_of_range("no decision map at date index " + std::to_string(i));
    if (i == schedule.dates) return stop;
    if (maps.size() != schedule.dates - 1) throw std::logic_error("decision map sequence is incomplete");
    return maps[i - 1];
}

std::vector<double> stopped_payoffs(const PathArray& paths, const DecisionMapSequence& maps,
                                    std::size_t from_index, const MaxCallPayoff& payoff) {
    const std::size_t n_dates = maps.schedule.dates;
    if (from_index + paths.dates != n_dates + 1)
        throw std::invalid_argument("paths do not run from the start date to maturity");
    const std::size_t d = paths.dim;
    std::vector<double> value(paths.paths, 0.0);
    std::vector<std::size_t> alive(paths.paths);
    std::iota(alive.begin(), alive.end(), std::size_t{0});
    std::vector<double> block;
    for (std::size_t j = from_index + 1; j <= n_dates && !alive.empty(); ++j) {
        const std::size_t local = j - from_index;
        const double t = maps.schedule.time(j);
        if (j == n_dates) {
            for (auto r : alive) value[r] = payoff(t, paths.at(r, local));
            break;
        }
        block.resize(alive.size() * d);
        for (std::size_t a = 0; a < alive.size(); ++a) {
            const auto x = paths.at(alive[a], local);
            std::copy(x.begin(), x.end(), block.begin() + static_cast<std::ptrdiff_t>(a * d));
        }
        const auto stop = maps.at(j).stops(block, alive.size());
        std::size_t kept = 0;
        for (std::size_t a = 0; a < alive.size(); ++a) {
            if (stop[a])
                value[alive[a]] = payoff(t, paths.at(alive[a], local));
            else
                alive[kept++] = alive[a];
        }
        alive.resize(kept);
    }
    return value;
}

double pathwise_stop(const PathArray& path, const DecisionMapSequence& maps,
                     std::size_t from_index, const MaxCallPayoff& payoff) {
    if (path.paths != 1) throw std::invalid_argument("pathwise_stop takes exactly one path");
    return stopped_payoffs(path, maps, from_index, payoff).front();
}

double estimate_continuation(std::span<const double> x, std::size_t i,
                             const DecisionMapSequence& maps, const GbmModel& model,
                             const MaxCallPayoff& payoff, std::size_t paths, Rng& rng) {
    if (paths == 0) throw std::invalid_argument("continuation estimate needs at least one path");
    if (i >= maps.schedule.dates) throw std::invalid_argument("no continuation after maturity");
    const auto sim = simulate_paths(model, x, i, maps.schedule, paths, rng);
    const auto v = stopped_payoffs(sim, maps, i, payoff);
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(paths);
}

MapTrainingConfig default_map_training(std::size_t d, std::uint64_t seed) {
    MapTrainingConfig c;
    if (d == 2) {
        c.domain = Box::cube(2, 50.0, 150.0);
        c.design = DesignKind::uniform_grid;
        c.m = 32 * 32;
    } else {
        c.domain = Box::cube(d, 30.0, 180.0);
        c.design = DesignKind::latin_hypercube;
        c.m = 1024 * d;
    }
    c.r = 100;
    c.hidden = {64, 64};
    c.train.epochs = 200;
    c.train.batch_size = 128;
    c.train.adam.learning_rate = 1e-3;
    c.seed = seed;
    return c;
}

namespace {

std::string date_key(std::size_t i, const char* field) {
    return "date_" + std::to_string(i) + "_" + field;
}

void record_setup(KeyValues& kv, const GbmModel& model, const ExerciseSchedule& schedule,
                  const MaxCallPayoff& payoff, const MapTrainingConfig& c) {
    kv.set("format", "surfrank-decision-maps v1");
    kv.set("d", model.dimension());
    kv.set("rate", model.rate);
    kv.set("dividend", model.dividend);
    kv.set("volatility", model.volatility);
    kv.set("strike", payoff.strike);
    kv.set("maturity", schedule.maturity);
    kv.set("dates", schedule.dates);
    kv.set("domain_lower", join_doubles(c.domain.lower()));
    kv.set("domain_upper", join_doubles(c.domain.upper()));
    kv.set("design", std::string(to_string(c.design)));
    kv.set("m", c.m);
    kv.set("r", c.r);
    std::string hidden;
    for (std::size_t k = 0; k < c.hidden.size(); ++k) hidden += (k ? "," : "") + std::to_string(c.hidden[k]);
    kv.set("hidden", hidden);
    kv.set("epochs", c.train.epochs);
    kv.set("batch_size", c.train.batch_size);
    kv.set("learning_rate", c.train.adam.learning_rate);
    kv.set("seed", static_cast<unsigned long long>(c.seed));
}

}  // namespace

DecisionMapSequence train_decision_maps(const GbmModel& model, const ExerciseSchedule& schedule,
                                        const MaxCallPayoff& payoff, const MapTrainingConfig& config) {
    model.validate();
    schedule.validate();
    const std::size_t d = model.dimension();
    if (config.domain.dimension() != d) throw std::invalid_argument("training domain has the wrong dimension");
    if (config.m == 0 || config.r == 0) throw std::invalid_argument("design and path budgets must be positive");
    for (double lo : config.domain.lower())
        if (!(lo > 0.0)) throw std::invalid_argument("training domain must lie in the positive orthant");

    DecisionMapSequence seq;
    seq.schedule = schedule;
    seq.domain = config.domain;
    seq.maps.assign(schedule.dates - 1, DecisionMap::constant(kStop));
    record_setup(seq.metadata, model, schedule, payoff, config);

    for (std::size_t i = schedule.dates - 1; i >= 1; --i) {
        const PointSet points = generate_design(config.design, config.m, config.domain,
                                                derive_seed(config.seed, i));
        const std::size_t m = points.size();
        const double t = schedule.time(i);
        std::vector<Label> labels(m);
        parallel_for(m, [&](std::size_t begin, std::size_t end) {
            for (std::size_t p = begin; p < end; ++p) {
                Rng rng(config.seed, {i, p + 1});
                const double c = estimate_continuation(points[p], i, seq, model, payoff, config.r, rng);
                labels[p] = c > payoff(t, points[p]) ? kContinue : kStop;
            }
        });
        const auto n_continue =
            static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kContinue));
        seq.metadata.set(date_key(i, "continue"), n_continue);
        seq.metadata.set(date_key(i, "stop"), m - n_continue);

        if (n_continue == 0 || n_continue == m) {
            seq.maps[i - 1] = DecisionMap::constant(n_continue == 0 ? kStop : kContinue);
        } else {
            nn::Tensor inputs({m, d});
            for (std::size_t p = 0; p < m; ++p)
                config.domain.to_unit(points[p], std::span<double>(inputs.data() + p * d, d));
            auto specs = nn::build_feedforward(d, 2, config.hidden, 0.0, 0.0);
            nn::TrainConfig tc = config.train;
            tc.seed = derive_seed(config.seed, 2000 + i);
            if (tc.batch_size > m) tc.batch_size = m;
            auto result = nn::train(nn::init_network(std::move(specs), derive_seed(config.seed, 1000 + i)),
                                    inputs, labels, tc);
            seq.metadata.set(date_key(i, "train_accuracy"), result.history.back().accuracy);
            seq.maps[i - 1] = DecisionMap(std::move(result.network), config.domain);
        }
        seq.metadata.set(date_key(i, "kind"), std::string(to_string(seq.maps[i - 1].kind())));
    }
    return seq;
}

PriceEstimate price(const GbmModel& model, const ExerciseSchedule& schedule,
                    const MaxCallPayoff& payoff, const DecisionMapSequence& maps,
                    std::size_t paths, std::size_t repetitions, std::uint64_t seed) {
    model.validate();
    if (paths == 0 || repetitions == 0) throw std::invalid_argument("pricing needs paths and repetitions");
    if (maps.schedule.dates != schedule.dates || maps.schedule.maturity != schedule.maturity)
        throw std::invalid_argument("decision maps were trained for a different schedule");

    constexpr std::size_t block = 4096;
    const std::size_t blocks = (paths + block - 1) / block;
    std::vector<double> block_sums(repetitions * blocks, 0.0);
    parallel_for(repetitions * blocks, [&](std::size_t begin, std::size_t end) {
        for (std::size_t job = begin; job < end; ++job) {
            const std::size_t k = job / blocks;
            const std::size_t b = job % blocks;
            const std::size_t n = std::min(block, paths - b * block);
            Rng rng(seed, {k, b});
            const auto sim = simulate_paths(model, model.x0, 0, schedule, n, rng);
            const auto v = stopped_payoffs(sim, maps, 0, payoff);
            block_sums[job] = std::accumulate(v.begin(), v.end(), 0.0);
        }
    });

    PriceEstimate est;
    est.paths = paths;
    est.repetitions = repetitions;
    est.seed = seed;
    est.repetition_means.resize(repetitions);
    for (std::size_t k = 0; k < repetitions; ++k) {
        double s = 0.0;
        for (std::size_t b = 0; b < blocks; ++b) s += block_sums[k * blocks + b];
        est.repetition_means[k] = s / static_cast<double>(paths);
    }
    const double mean = std::accumulate(est.repetition_means.begin(), est.repetition_means.end(), 0.0) /
                        static_cast<double>(repetitions);
    double ss = 0.0;
    for (double v : est.repetition_means) ss += (v - mean) * (v - mean);
    est.std_dev = repetitions > 1 ? std::sqrt(ss / static_cast<double>(repetitions - 1)) : 0.0;
    est.std_error = est.std_dev / std::sqrt(static_cast<double>(repetitions));
    est.price = std::max(payoff(0.0, model.x0), mean);
    return est;
}

void save_decision_maps(const DecisionMapSequence& maps, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    KeyValues kv = maps.metadata;
    kv.set("format", "surfrank-decision-maps v1");
    kv.set("maturity", maps.schedule.maturity);
    kv.set("dates", maps.schedule.dates);
    kv.set("domain_lower", join_doubles(maps.domain.lower()));
    kv.set("domain_upper", join_doubles(maps.domain.upper()));
    for (std::size_t i = 1; i < maps.schedule.dates; ++i) {
        const auto& m = maps.at(i);
        kv.set(date_key(i, "kind"), std::string(to_string(m.kind())));
        if (m.kind() == DecisionMap::Kind::network) {
            const std::string file = "map_" + std::to_string(i) + ".net";
            kv.set(date_key(i, "file"), file);
            nn::save_network(m.network(), dir / file);
        }
    }
    kv.save(dir / "manifest.txt");
}

DecisionMapSequence load_decision_maps(const std::filesystem::path& dir) {
    const KeyValues kv = KeyValues::load(dir / "manifest.txt");
    if (kv.get_or("format", "") != "surfrank-decision-maps v1")
        throw std::runtime_error("'" + dir.string() + "' does not hold a decision-map sequence");
    DecisionMapSequence seq;
    seq.metadata = kv;
    seq.schedule.maturity = kv.get_double("maturity");
    seq.schedule.dates = static_cast<std::size_t>(kv.get_u64("dates"));
    seq.schedule.validate();
    seq.domain = Box(kv.get_doubles("domain_lower"), kv.get_doubles("domain_upper"));
    for (std::size_t i = 1; i < seq.schedule.dates; ++i) {
        const auto& kind = kv.get(date_key(i, "kind"));
        if (kind == "stop") {
            seq.maps.push_back(DecisionMap::constant(kStop));
        } else if (kind == "continue") {
            seq.maps.push_back(DecisionMap::constant(kContinue));
        } else if (kind == "network") {
            seq.maps.emplace_back(nn::load_network(dir / kv.get(date_key(i, "file"))), seq.domain);
        } else {
            throw std::runtime_error("unknown decision map kind '" + kind + "'");
        }
    }
    return seq;
}

void write_decision_map_csv(const DecisionMap& map, const Box& domain,
                            std::span<const double> anchor, std::size_t n, std::ostream& out) {
    const std::size_t d = domain.dimension();
    if (d < 2) throw std::invalid_argument("decision map export needs at least two assets");
    if (anchor.size() != d) throw std::invalid_argument("anchor point has the wrong dimension");
    const Box plane({domain.lower()[0], domain.lower()[1]}, {domain.upper()[0], domain.upper()[1]});
    const PointSet grid = uniform_grid(plane, n);
    std::vector<double> points(grid.size() * d);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        std::copy(anchor.begin(), anchor.end(), points.begin() + static_cast<std::ptrdiff_t>(p * d));
        points[p * d] = grid[p][0];
        points[p * d + 1] = grid[p][1];
    }
    const auto prob = map.continue_probability(points, grid.size());
    out << "x1,x2,p_continue\n";
    for (std::size_t p = 0; p < grid.size(); ++p)
        out << format_double(grid[p][0]) << ',' << format_double(grid[p][1]) << ','
            << format_double(prob[p]) << '\n';
}

}  // namespace surfrank
