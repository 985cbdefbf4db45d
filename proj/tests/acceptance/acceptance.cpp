// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Criteria 2-9 drive the surfrank command line exactly as a
// user would; outputs land under --workdir.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surfrank/bermudan.hpp"
#include "surfrank/design.hpp"
#include "surfrank/lattice.hpp"
#include "surfrank/nn/grad_check.hpp"
#include "surfrank/nn/network.hpp"
#include "surfrank/surfaces.hpp"
#include "surfrank_cli.hpp"

namespace fs = std::filesystem;
using namespace surfrank;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun surfrank_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "surfrank");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    if (r.code != 0) throw std::runtime_error("surfrank exited with " + std::to_string(r.code) + ": " + r.err);
    return r;
}

double field(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + "=");
    if (pos == std::string::npos) throw std::runtime_error("no '" + key + "' in output: " + text);
    return std::stod(text.substr(pos + key.size() + 1));
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Every regular file below `a` has a byte-identical twin below `b`.
bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), a);
        ++files;
        if (!fs::exists(b / rel) || slurp(e.path()) != slurp(b / rel)) {
            why = rel.string() + " differs";
            return false;
        }
    }
    why = std::to_string(files) + " files identical";
    return files > 0;
}

struct Suite {
    fs::path work;
    std::string seed = "7";
    std::set<int> only;
    int failures = 0;

    // Reused across criteria.
    double lattice90 = 0.0;

    void run(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
        if (!only.empty() && !only.count(id)) return;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double t = seconds_since(t0);
        if (t > limit_s) {
            o.pass = false;
            o.detail += "; over time limit " + fmt("%.0fs", limit_s);
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "C" << id << " " << title << ": " << o.detail
                  << " (" << fmt("%.1fs", t) << ")" << std::endl;
    }

    fs::path dir(const std::string& name) const { return work / name; }

    CliRun rank(const std::string& name, std::vector<std::string> extra) {
        std::vector<std::string> args{"rank", "--seed", seed, "--out", dir(name).string()};
        args.insert(args.end(), extra.begin(), extra.end());
        return surfrank_cli(args);
    }
};

// Small nonzero biases keep ReLU units off their kink for the differences.
void nudge_biases(nn::Network& net, Rng& rng) {
    for (auto& block : net.params())
        for (auto& b : block.bias.values()) b = 0.2 * (rng.uniform() - 0.5);
}

Outcome gradient_oracle() {
    Rng rng(1);
    auto random_tensor = [&](std::vector<std::size_t> shape) {
        nn::Tensor t(std::move(shape));
        for (auto& v : t.values()) v = 2.0 * rng.uniform() - 1.0;
        return t;
    };
    auto random_labels = [&](std::size_t n, int classes) {
        std::vector<Label> out;
        for (std::size_t i = 0; i < n; ++i) out.emplace_back(1 + static_cast<int>(rng.uniform() * classes));
        return out;
    };
    auto ff = nn::init_network(nn::build_feedforward(8, 5, {16, 16, 16}, 1e-3, 1e-3), 2);
    nudge_biases(ff, rng);
    const double e_ff = nn::grad_check(ff, random_tensor({8, 8}), random_labels(8, 5));

    auto unet = nn::init_network(nn::build_unet(8, 8, 2, 5, 4), 3);
    nudge_biases(unet, rng);
    const double e_unet = nn::grad_check(unet, random_tensor({1, 8, 8, 2}), random_labels(64, 5));

    const bool pass = e_ff < 1e-5 && e_unet < 1e-5;
    return {pass, "feed-forward " + fmt("%.2e", e_ff) + ", UNet " + fmt("%.2e", e_unet) + " (need < 1e-5)"};
}

Outcome properties(const Suite& s) {
    std::vector<std::string> broken;

    // surfaces: shift invariance and tie-break of the argmin.
    {
        const auto base = make_2d_example();
        std::vector<SurfaceFn> shifted;
        for (int l = 1; l <= 5; ++l)
            shifted.push_back([&base, l](std::span<const double> x) { return base.eval(Label{l}, x) - 3.5; });
        const SurfaceSet moved("shifted", base.domain(), shifted, base.noise_sd());
        const auto grid = uniform_grid(base.domain(), 51);
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (moved.true_label(grid[i]) != base.true_label(grid[i])) {
                broken.push_back("shift invariance");
                break;
            }
        const auto flat = [](std::span<const double>) { return 0.0; };
        const SurfaceSet tie("tie", Box::cube(2, 0, 1), {flat, flat, flat}, {0, 0, 0});
        if (tie.true_label(std::vector<double>{0.3, 0.4}) != Label{1}) broken.push_back("tie-break");
    }

    // nn: softmax normalization and permutation invariance of the batch gradient.
    {
        Rng rng(4);
        auto net = nn::init_network(nn::build_feedforward(3, 5, {16, 16}), 5);
        nudge_biases(net, rng);
        nn::Tensor x({32, 3});
        for (auto& v : x.values()) v = 4.0 * rng.uniform() - 2.0;
        std::vector<Label> y;
        for (int i = 0; i < 32; ++i) y.emplace_back(1 + i % 5);
        const auto p = nn::forward(net, x);
        for (std::size_t r = 0; r < p.rows(); ++r) {
            double sum = 0.0;
            for (double v : p.row(r)) sum += v;
            if (std::abs(sum - 1.0) > 1e-9) {
                broken.push_back("softmax normalization");
                break;
            }
        }
        nn::Tensor xr = x;
        std::vector<Label> yr(y.rbegin(), y.rend());
        for (std::size_t r = 0; r < 32; ++r)
            std::copy_n(x.row(31 - r).begin(), 3, xr.row(r).begin());
        const auto g0 = nn::backward(net, x, y);
        const auto g1 = nn::backward(net, xr, yr);
        double worst = 0.0;
        for (std::size_t i = 0; i < g0.blocks.size(); ++i)
            for (std::size_t k = 0; k < g0.blocks[i].weights.size(); ++k)
                worst = std::max(worst, std::abs(g0.blocks[i].weights[k] - g1.blocks[i].weights[k]));
        if (worst > 1e-12) broken.push_back("permutation invariance");
    }

    // lattice: Bermudan >= European, symmetry in the assets.
    {
        LatticeParams p;
        p.steps_per_interval = 20;
        const double berm = lattice_price(p);
        p.european_only = true;
        if (!(berm >= lattice_price(p))) broken.push_back("Bermudan >= European");
        LatticeParams a, b;
        a.steps_per_interval = b.steps_per_interval = 20;
        a.model.x0 = {85.0, 105.0};
        b.model.x0 = {105.0, 85.0};
        if (std::abs(lattice_price(a) - lattice_price(b)) > 1e-10) broken.push_back("lattice symmetry");
    }

    // bermudan: price increases with X(0) under fixed decision maps.
    {
        const auto maps_dir = s.dir("c8") / "maps";
        const auto maps = fs::exists(maps_dir / "manifest.txt")
                              ? load_decision_maps(maps_dir)
                              : train_decision_maps(reference_model(2, 90), reference_schedule(),
                                                    reference_payoff(), default_map_training(2, 7));
        double prev = -1.0;
        for (double x0 : {80.0, 90.0, 100.0, 110.0}) {
            const double v = price(reference_model(2, x0), reference_schedule(), reference_payoff(), maps,
                                   16000, 4, 11).price;
            if (!(v > prev)) {
                broken.push_back("monotonicity in X(0)");
                break;
            }
            prev = v;
        }
    }

    if (broken.empty()) return {true, "tie-break, shift invariance, softmax rows, permutation invariance, "
                                      "Bermudan >= European, symmetry, monotone in X(0)"};
    std::string why = "violated:";
    for (const auto& b : broken) why += " " + b + ";";
    return {false, why};
}

}  // namespace

int main(int argc, char** argv) {
    Suite s;
    std::string only;
    CLI::App app{"surfrank acceptance suite"};
    app.add_option("--workdir", s.work, "directory for run outputs")->required();
    app.add_option("--only", only, "comma-separated criterion numbers to run");
    CLI11_PARSE(app, argc, argv);
    std::stringstream list(only);
    for (std::string tok; std::getline(list, tok, ',');)
        if (!tok.empty()) s.only.insert(std::stoi(tok));
    fs::remove_all(s.work);
    fs::create_directories(s.work);

    s.run(1, "gradient oracle", 60, gradient_oracle);

    s.run(2, "1D UNIF M=128", 120, [&] {
        const auto r = s.rank("c2", {"--example", "1d", "--design", "unif", "--m", "128"});
        const double gen = field(r.out, "generalization_accuracy");
        return Outcome{gen >= 0.98, "gen " + fmt("%.4f", gen) + " (need >= 0.98)"};
    });

    s.run(3, "1D UNIF+NL M=128", 120, [&] {
        const auto r = s.rank("c3", {"--example", "1d", "--design", "unif", "--noisy", "--m", "128"});
        const double train = field(r.out, "train_accuracy");
        const double gen = field(r.out, "generalization_accuracy");
        return Outcome{train >= 0.70 && train <= 0.90 && gen >= 0.96,
                       "train " + fmt("%.4f", train) + " (need [0.70, 0.90]), gen " + fmt("%.4f", gen) +
                           " (need >= 0.96)"};
    });

    s.run(4, "2D UNIF M=576", 300, [&] {
        const auto r = s.rank("c4", {"--example", "2d", "--design", "unif", "--m", "576"});
        const double gen = field(r.out, "generalization_accuracy");
        return Outcome{gen >= 0.95, "gen " + fmt("%.4f", gen) + " (need >= 0.95)"};
    });

    s.run(5, "2D UNet vs feed-forward, UNIF+NL M=576", 600, [&] {
        const std::vector<std::string> data{"--example", "2d", "--design", "unif", "--noisy", "--m", "576"};
        auto ff_args = data;
        ff_args.insert(ff_args.end(), {"--net", "feedforward"});
        auto unet_args = data;
        unet_args.insert(unet_args.end(), {"--net", "unet"});
        const double ff = field(s.rank("c5-ff", ff_args).out, "generalization_accuracy");
        const double unet = field(s.rank("c5-unet", unet_args).out, "generalization_accuracy");
        return Outcome{unet >= ff - 0.01, "UNet " + fmt("%.4f", unet) + " vs feed-forward " + fmt("%.4f", ff) +
                                              " (need UNet >= feed-forward - 0.01)"};
    });

    s.run(6, "10D, 3 hidden layers", 600, [&] {
        const double clean = field(s.rank("c6-clean", {"--example", "10d"}).out, "generalization_accuracy");
        const double noisy =
            field(s.rank("c6-noisy", {"--example", "10d", "--noisy", "--noise-sd", "0.5,0.4,0.45"}).out,
                  "generalization_accuracy");
        return Outcome{clean >= 0.90 && noisy >= 0.88, "clean gen " + fmt("%.4f", clean) +
                                                           " (need >= 0.90), noisy gen " + fmt("%.4f", noisy) +
                                                           " (need >= 0.88)"};
    });

    s.run(7, "lattice oracle", 60, [&] {
        const double p90 = field(surfrank_cli({"lattice", "--x0", "90", "--steps", "40", "--out",
                                               s.dir("c7-90").string()})
                                     .out,
                                 "price");
        const double p110 = field(surfrank_cli({"lattice", "--x0", "110", "--steps", "40", "--out",
                                                s.dir("c7-110").string()})
                                      .out,
                                  "price");
        s.lattice90 = p90;
        const bool pass = std::abs(p90 - 8.075) <= 0.01 && std::abs(p110 - 21.345) <= 0.01;
        return Outcome{pass, "X0=90: " + fmt("%.4f", p90) + " (need 8.075 +- 0.01), X0=110: " + fmt("%.4f", p110) +
                                 " (need 21.345 +- 0.01)"};
    });

    s.run(8, "Bermudan d=2, desk scale", 900, [&] {
        if (s.lattice90 == 0.0) {
            LatticeParams p;
            p.steps_per_interval = 40;
            s.lattice90 = lattice_price(p);
        }
        const auto r = surfrank_cli({"price", "--d", "2", "--x0", "90", "--scale", "desk", "--seed", s.seed,
                                     "--out", s.dir("c8").string()});
        const double v = field(r.out, "price");
        const double se = field(r.out, "std_error");
        const bool in_band = v >= 7.90 && v <= 8.20;
        const bool near_ref = std::abs(v - 8.075) <= 3.0 * se;
        const bool lower = v - 3.0 * se <= 1.005 * s.lattice90;
        return Outcome{in_band && near_ref && lower,
                       "price " + fmt("%.4f", v) + " stderr " + fmt("%.4f", se) + " (need [7.90, 8.20]: " +
                           (in_band ? "yes" : "no") + "; |price - 8.075| <= 3 stderr: " + (near_ref ? "yes" : "no") +
                           "; price - 3 stderr <= 1.005 x lattice " + fmt("%.4f", s.lattice90) + ": " +
                           (lower ? "yes" : "no") + ")"};
    });

    s.run(9, "Bermudan d=5, X0=100, desk scale", 1800, [&] {
        const auto r = surfrank_cli({"price", "--d", "5", "--x0", "100", "--scale", "desk", "--seed", s.seed,
                                     "--out", s.dir("c9").string()});
        const double v = field(r.out, "price");
        return Outcome{v >= 25.5 && v <= 26.5, "price " + fmt("%.4f", v) + " stderr " +
                                                   fmt("%.4f", field(r.out, "std_error")) +
                                                   " (need [25.5, 26.5])"};
    });

    s.run(10, "determinism of criteria 2, 4, 8", 1200, [&] {
        std::string detail;
        bool pass = true;
        auto rerun = [&](const std::string& name, std::vector<std::string> args) {
            if (!fs::exists(s.dir(name))) surfrank_cli(args);  // first run when that criterion was skipped
            for (auto& a : args)
                if (a == s.dir(name).string()) a = s.dir(name + "-again").string();
            surfrank_cli(args);
            std::string why;
            const bool same = same_tree(s.dir(name), s.dir(name + "-again"), why);
            pass = pass && same;
            detail += (detail.empty() ? "" : "; ") + name + ": " + why;
        };
        rerun("c2", {"rank", "--seed", s.seed, "--out", s.dir("c2").string(), "--example", "1d", "--design",
                     "unif", "--m", "128"});
        rerun("c4", {"rank", "--seed", s.seed, "--out", s.dir("c4").string(), "--example", "2d", "--design",
                     "unif", "--m", "576"});
        rerun("c8", {"price", "--d", "2", "--x0", "90", "--scale", "desk", "--seed", s.seed, "--out",
                     s.dir("c8").string()});
        return Outcome{pass, detail};
    });

    s.run(11, "property suites", 300, [&] { return properties(s); });

    std::cout << (s.failures == 0 ? "all criteria passed" : std::to_string(s.failures) + " criteria failed")
              << std::endl;
    return s.failures == 0 ? 0 : 1;
}
