#include "surfrank_cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "surfrank/bermudan.hpp"
#include "surfrank/lattice.hpp"
#include "surfrank/parallel.hpp"
#include "surfrank/ranking.hpp"

namespace surfrank::cli {

namespace {

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    if (text.empty()) return values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const char* first = item.data();
        const char* last = first + item.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw std::invalid_argument(std::string("bad value '") + item + "' in --" + what);
        values.push_back(v);
    }
    return values;
}

std::vector<std::size_t> parse_sizes(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    for (double v : parse_list(text, what)) {
        if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw std::invalid_argument(std::string("--") + what + " takes positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<double> parse_x0(const RunConfig& c, std::size_t d) {
    auto x0 = parse_list(c.x0, "x0");
    if (x0.size() == 1) x0.assign(d, x0.front());
    if (x0.size() != d)
        throw std::invalid_argument("--x0 needs one value or " + std::to_string(d) + " values");
    return x0;
}

bool paper_scale(const RunConfig& c) {
    if (c.scale != "desk" && c.scale != "paper")
        throw std::invalid_argument("--scale must be desk or paper, got '" + c.scale + "'");
    return c.scale == "paper";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void prepare_out_dir(const RunConfig& c) { std::filesystem::create_directories(c.out_dir); }

GbmModel model_from(const RunConfig& c, std::size_t d) {
    GbmModel m;
    m.rate = c.rate;
    m.dividend = c.dividend;
    m.volatility = c.sigma;
    m.x0 = parse_x0(c, d);
    m.validate();
    return m;
}

}  // namespace

KeyValues RunConfig::manifest() const {
    KeyValues kv;
    kv.set("command", command);
    kv.set("seed", static_cast<unsigned long long>(seed));
    kv.set("threads", static_cast<unsigned long long>(threads));
    kv.set("scale", scale);
    if (command == "rank") {
        kv.set("example", example);
        kv.set("design", design);
        if (!design_file.empty()) kv.set("design_file", design_file.string());
        kv.set("m", m);
        kv.set("noisy", noisy);
        kv.set("noise_sd", noise_sd);
        kv.set("trid_exponent", trid_exponent);
        kv.set("net", net);
        kv.set("hidden", hidden);
        kv.set("unet_base", unet_base);
        kv.set("epochs", epochs);
        kv.set("batch", batch);
        kv.set("lr", lr);
        kv.set("l1", l1);
        kv.set("l2", l2);
        return kv;
    }
    kv.set("x0", x0);
    kv.set("rate", rate);
    kv.set("dividend", dividend);
    kv.set("sigma", sigma);
    kv.set("strike", strike);
    kv.set("maturity", maturity);
    kv.set("dates", dates);
    if (command == "price") {
        kv.set("d", d);
        if (!maps_dir.empty()) kv.set("maps", maps_dir.string());
        kv.set("paths", paths);
        kv.set("reps", reps);
        kv.set("m", m);
        kv.set("r", r);
        kv.set("hidden", hidden);
        kv.set("epochs", epochs);
        kv.set("batch", batch);
        kv.set("lr", lr);
    } else {
        kv.set("steps", steps);
        kv.set("table", table);
        kv.set("european_only", european_only);
        kv.set("no_average", no_average);
    }
    return kv;
}

int cmd_rank(const RunConfig& c, std::ostream& out) {
    paper_scale(c);
    const NetKind kind = parse_net_kind(c.net);
    ExperimentPreset p = make_preset(c.example, c.m, kind, c.seed);

    auto noise = parse_list(c.noise_sd, "noise-sd");
    if (c.example == "10d") {
        TenDOptions opts;
        opts.trid_exponent = c.trid_exponent;
        if (!noise.empty())
            opts.noise_sd = noise;
        else if (c.noisy)
            opts.noise_sd = {0.5, 0.4, 0.45};
        p.set = make_10d_example(opts);
    } else if (!noise.empty()) {
        p.set = p.set.with_noise(noise);
    }

    if (!c.design.empty()) p.design.kind = parse_design_kind(c.design);
    p.design.file = c.design_file;
    p.design.noisy = c.noisy;
    if (p.design.kind == DesignKind::from_file && c.design_file.empty())
        throw std::invalid_argument("--design file needs --design-file");
    if (!c.hidden.empty()) p.net.hidden = parse_sizes(c.hidden, "hidden");
    if (c.unet_base) p.net.unet_base = c.unet_base;
    p.net.l1 = c.l1;
    p.net.l2 = c.l2;
    if (c.epochs) p.train.epochs = c.epochs;
    if (c.batch) p.train.batch_size = c.batch;
    if (c.lr > 0.0) p.train.adam.learning_rate = c.lr;

    const auto report = run_experiment(p.set, p.design, p.net, p.train, default_eval_grid(p.set));

    prepare_out_dir(c);
    std::ostringstream doc, preds, hist;
    write_report(report, doc);
    write_predictions_csv(report, preds);
    hist << "epoch,loss,accuracy\n";
    for (const auto& h : report.history)
        hist << h.epoch << ',' << format_double(h.loss) << ',' << format_double(h.accuracy) << '\n';
    write_file(c.out_dir / "report.txt", doc.str());
    write_file(c.out_dir / "predictions.csv", preds.str());
    write_file(c.out_dir / "history.csv", hist.str());
    KeyValues manifest = c.manifest();
    manifest.set("design", std::string(to_string(p.design.kind)));
    manifest.set("m", report.design.points.size());
    manifest.set("unet_base", p.net.unet_base);
    manifest.set("epochs", p.train.epochs);
    manifest.set("batch", p.train.batch_size);
    manifest.set("lr", p.train.adam.learning_rate);
    manifest.save(c.out_dir / "manifest.txt");

    out << "train_accuracy=" << format_double(report.train_accuracy)
        << " generalization_accuracy=" << format_double(report.generalization_accuracy) << '\n';
    return 0;
}

int cmd_price(const RunConfig& c, std::ostream& out) {
    const bool paper = paper_scale(c);
    if (c.d == 0) throw std::invalid_argument("--d must be at least 1");
    const GbmModel model = model_from(c, c.d);
    const ExerciseSchedule schedule{c.maturity, c.dates};
    schedule.validate();
    const MaxCallPayoff payoff{c.strike, c.rate};
    const std::size_t paths = c.paths ? c.paths : (paper ? 160000 : 16000);
    const std::size_t reps = c.reps ? c.reps : (paper ? 100 : 20);

    prepare_out_dir(c);
    DecisionMapSequence maps;
    if (!c.maps_dir.empty()) {
        maps = load_decision_maps(c.maps_dir);
        if (maps.domain.dimension() != c.d)
            throw std::invalid_argument("decision maps in '" + c.maps_dir.string() + "' are for d = " +
                                        std::to_string(maps.domain.dimension()));
    } else {
        MapTrainingConfig mc = default_map_training(c.d, derive_seed(c.seed, 1));
        if (c.m) mc.m = c.m;
        if (c.r) mc.r = c.r;
        if (!c.hidden.empty()) mc.hidden = parse_sizes(c.hidden, "hidden");
        if (c.epochs) mc.train.epochs = c.epochs;
        if (c.batch) mc.train.batch_size = c.batch;
        if (c.lr > 0.0) mc.train.adam.learning_rate = c.lr;
        maps = train_decision_maps(model, schedule, payoff, mc);
        save_decision_maps(maps, c.out_dir / "maps");
    }

    const PriceEstimate est = price(model, schedule, payoff, maps, paths, reps, derive_seed(c.seed, 2));

    KeyValues result;
    result.set("price", est.price);
    result.set("std_dev", est.std_dev);
    result.set("std_error", est.std_error);
    result.set("paths", est.paths);
    result.set("repetitions", est.repetitions);
    result.set("pricing_seed", static_cast<unsigned long long>(est.seed));
    result.set("repetition_means", join_doubles(est.repetition_means));
    result.save(c.out_dir / "price.txt");

    if (c.d >= 2) {
        for (std::size_t i = 1; i < schedule.dates; ++i) {
            std::ostringstream csv;
            write_decision_map_csv(maps.at(i), maps.domain, model.x0, 101, csv);
            write_file(c.out_dir / ("decision_map_" + std::to_string(i) + ".csv"), csv.str());
        }
    }
    KeyValues manifest = c.manifest();
    manifest.set("paths", paths);
    manifest.set("reps", reps);
    manifest.save(c.out_dir / "manifest.txt");

    out << "price=" << format_double(est.price) << " std_dev=" << format_double(est.std_dev)
        << " std_error=" << format_double(est.std_error) << '\n';
    return 0;
}

int cmd_lattice(const RunConfig& c, std::ostream& out) {
    paper_scale(c);
    LatticeParams p;
    p.model = model_from(c, 2);
    p.schedule = ExerciseSchedule{c.maturity, c.dates};
    p.payoff = MaxCallPayoff{c.strike, c.rate};
    p.steps_per_interval = c.steps;
    p.european_only = c.european_only;
    p.average_adjacent = !c.no_average;
    const double value = lattice_price(p);
    const auto rows = convergence_table(p, parse_sizes(c.table, "table"));

    prepare_out_dir(c);
    std::ostringstream csv;
    write_convergence_csv(rows, csv);
    write_file(c.out_dir / "lattice.csv", csv.str());
    c.manifest().save(c.out_dir / "manifest.txt");
    out << "price=" << format_double(value) << '\n';
    return 0;
}

namespace {

// Turns a key=value file into "--key=value" tokens; "true"/"false" toggle flags.
std::vector<std::string> config_tokens(const std::filesystem::path& path) {
    std::vector<std::string> tokens;
    const KeyValues doc = KeyValues::load(path);
    for (const auto& [key, value] : doc.entries()) {
        if (value == "false") continue;
        tokens.push_back(value == "true" ? "--" + key : "--" + key + "=" + value);
    }
    return tokens;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Neural ranking of response surfaces and Bermudan max-call pricing", "surfrank"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.add_option("--config", "key=value file of option defaults; explicit flags win");

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "master seed")->envname("SURFRANK_SEED");
        sub->add_option("--threads", c.threads, "worker cap (0 = all cores)");
        sub->add_option("--scale", c.scale, "budget preset: desk or paper");
        sub->add_option("--out", c.out_dir, "output directory");
    };
    auto model_opts = [&](CLI::App* sub) {
        sub->add_option("--x0", c.x0, "initial price, one value or one per asset");
        sub->add_option("--rate", c.rate, "interest rate");
        sub->add_option("--dividend", c.dividend, "dividend yield");
        sub->add_option("--sigma", c.sigma, "volatility");
        sub->add_option("--strike", c.strike, "strike");
        sub->add_option("--maturity", c.maturity, "maturity in years");
        sub->add_option("--dates", c.dates, "number of exercise dates");
    };

    auto* rank = app.add_subcommand("rank", "train a ranking classifier on a built-in example");
    common(rank);
    rank->add_option("--example", c.example, "1d, 2d or 10d");
    rank->add_option("--design", c.design, "unif, lhs or file");
    rank->add_option("--design-file", c.design_file, "point file for --design file");
    rank->add_option("--m", c.m, "design budget (0 = example default)");
    rank->add_flag("--noisy", c.noisy, "label by noisy draws instead of the true argmin");
    rank->add_option("--noise-sd", c.noise_sd, "comma-separated per-surface noise override");
    rank->add_option("--trid-exponent", c.trid_exponent, "exponent of the Trid surface (10d)");
    rank->add_option("--net", c.net, "feedforward or unet");
    rank->add_option("--hidden", c.hidden, "comma-separated hidden widths");
    rank->add_option("--unet-base", c.unet_base, "UNet first-level channels");
    rank->add_option("--epochs", c.epochs, "training epochs");
    rank->add_option("--batch", c.batch, "mini-batch size");
    rank->add_option("--lr", c.lr, "Adam learning rate");
    rank->add_option("--l1", c.l1, "activity regularizer, L1 weight");
    rank->add_option("--l2", c.l2, "activity regularizer, L2 weight");

    auto* price_cmd = app.add_subcommand("price", "train decision maps and price a Bermudan max-call");
    common(price_cmd);
    model_opts(price_cmd);
    price_cmd->add_option("--d", c.d, "number of assets");
    price_cmd->add_option("--maps", c.maps_dir, "load decision maps instead of training");
    price_cmd->add_option("--paths", c.paths, "out-of-sample paths per repetition");
    price_cmd->add_option("--reps", c.reps, "pricing repetitions");
    price_cmd->add_option("--m", c.m, "design points per date");
    price_cmd->add_option("--r", c.r, "inner paths per design point");
    price_cmd->add_option("--hidden", c.hidden, "comma-separated hidden widths");
    price_cmd->add_option("--epochs", c.epochs, "training epochs per date");
    price_cmd->add_option("--batch", c.batch, "mini-batch size");
    price_cmd->add_option("--lr", c.lr, "Adam learning rate");

    auto* lattice = app.add_subcommand("lattice", "two-asset binomial lattice reference price");
    common(lattice);
    model_opts(lattice);
    lattice->add_option("--steps", c.steps, "lattice steps per exercise interval");
    lattice->add_option("--table", c.table, "comma-separated step counts for lattice.csv");
    lattice->add_flag("--european-only", c.european_only, "exercise at maturity only");
    lattice->add_flag("--no-average", c.no_average, "report the n-step price without averaging n and n+1");

    std::vector<std::string> tokens(argv, argv + argc);
    try {
        // Config entries go right after the subcommand name so that later
        // explicit flags override them.
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            std::filesystem::path file;
            std::size_t erase = 0;
            if (tokens[i] == "--config" && i + 1 < tokens.size()) {
                file = tokens[i + 1];
                erase = 2;
            } else if (tokens[i].rfind("--config=", 0) == 0) {
                file = tokens[i].substr(9);
                erase = 1;
            }
            if (erase == 0) continue;
            tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                         tokens.begin() + static_cast<std::ptrdiff_t>(i + erase));
            auto sub = std::find_if(tokens.begin() + 1, tokens.end(), [](const std::string& t) {
                return t == "rank" || t == "price" || t == "lattice";
            });
            if (sub == tokens.end()) throw std::invalid_argument("--config needs a subcommand");
            const auto extra = config_tokens(file);
            tokens.insert(sub + 1, extra.begin(), extra.end());
            break;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    std::vector<const char*> ptrs;
    ptrs.reserve(tokens.size());
    for (const auto& t : tokens) ptrs.push_back(t.c_str());
    try {
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        set_max_threads(c.threads);
        if (rank->parsed()) {
            c.command = "rank";
            return cmd_rank(c, out);
        }
        if (price_cmd->parsed()) {
            c.command = "price";
            return cmd_price(c, out);
        }
        c.command = "lattice";
        return cmd_lattice(c, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace surfrank::cli
