#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "surfrank/kv.hpp"

namespace surfrank::cli {

/// Effective settings of one invocation. Zero-valued budgets and training
/// knobs mean "use the preset for this experiment and scale".
struct RunConfig {
    std::string command;
    std::filesystem::path out_dir = "surfrank-out";
    std::uint64_t seed = 7;
    unsigned threads = 0;
    std::string scale = "desk";

    // rank
    std::string example = "1d";
    std::string design;  // empty: example default
    std::filesystem::path design_file;
    std::size_t m = 0;
    bool noisy = false;
    std::string noise_sd;
    int trid_exponent = 10;
    std::string net = "feedforward";
    std::string hidden;
    std::size_t unet_base = 0;
    std::size_t epochs = 0;
    std::size_t batch = 0;
    double lr = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;

    // price
    std::size_t d = 2;
    std::string x0 = "90";
    std::filesystem::path maps_dir;
    std::size_t paths = 0;
    std::size_t reps = 0;
    std::size_t r = 0;

    // model, shared by price and lattice
    double rate = 0.05;
    double dividend = 0.10;
    double sigma = 0.2;
    double strike = 100.0;
    double maturity = 3.0;
    std::size_t dates = 9;

    // lattice
    std::size_t steps = 100;
    std::string table = "5,10,20,40";
    bool european_only = false;
    bool no_average = false;

    /// The settings relevant to `command`, as echoed into manifest.txt.
    KeyValues manifest() const;
};

/// Trains and scores a ranking classifier. Writes report.txt,
/// predictions.csv, history.csv and manifest.txt into out_dir and prints
/// the accuracy pair.
int cmd_rank(const RunConfig& config, std::ostream& out);

/// Trains (or loads with maps_dir) decision maps and prices the max-call.
/// Writes price.txt, manifest.txt, maps/ and one decision_map_<i>.csv per
/// exercise date into out_dir and prints the estimate.
int cmd_price(const RunConfig& config, std::ostream& out);

/// Runs the binomial lattice. Writes lattice.csv (convergence table) and
/// manifest.txt into out_dir and prints the price.
int cmd_lattice(const RunConfig& config, std::ostream& out);

/// Parses arguments (with an optional --config key=value file whose
/// entries are overridden by explicit flags), dispatches, and maps
/// failures to a one-line diagnostic on `err`: exit 2 for usage errors,
/// 1 for everything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace surfrank::cli
