#include "surfrank/nn/serialize.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace surfrank::nn {

namespace {

constexpr const char* kMagic = "surfrank-network";
constexpr const char* kVersion = "v1";

std::string hex(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
    if (ec != std::errc{}) throw std::runtime_error("cannot format parameter value");
    return std::string(buf, end);
}

[[noreturn]] void malformed(const std::string& what) {
    throw std::runtime_error("malformed network file: " + what);
}

double parse_hex(const std::string& token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    bool negative = false;
    if (first != last && *first == '-') {
        negative = true;
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::hex);
    if (ec != std::errc{} || ptr != last) malformed("bad number '" + token + "'");
    return negative ? -v : v;
}

template <typename T>
T read(std::istream& in, const char* what) {
    T v{};
    if (!(in >> v)) malformed(std::string("expected ") + what);
    return v;
}

void expect(std::istream& in, const std::string& word) {
    if (read<std::string>(in, word.c_str()) != word) malformed("expected '" + word + "'");
}

}  // namespace

void save_network(const Network& net, std::ostream& out) {
    out << kMagic << ' ' << kVersion << '\n';
    out << "seed " << net.seed() << '\n';
    out << "layers " << net.specs().size() << '\n';
    for (const auto& s : net.specs()) {
        out << "layer " << to_string(s.kind) << ' ' << s.units << ' ' << to_string(s.activation) << ' '
            << s.skip << ' ' << hex(s.l1) << ' ' << hex(s.l2) << ' ' << s.shape.size();
        for (auto e : s.shape) out << ' ' << e;
        out << '\n';
    }
    for (std::size_t i = 0; i < net.params().size(); ++i) {
        const auto& p = net.params()[i];
        if (p.weights.empty()) continue;
        out << "params " << i << ' ' << p.weights.dim(0) << ' ' << p.weights.dim(1) << '\n';
        for (std::size_t k = 0; k < p.weights.size(); ++k) out << (k ? " " : "") << hex(p.weights[k]);
        out << '\n';
        for (std::size_t k = 0; k < p.bias.size(); ++k) out << (k ? " " : "") << hex(p.bias[k]);
        out << '\n';
    }
    out << "end\n";
    if (!out) throw std::runtime_error("failed writing network");
}

Network load_network(std::istream& in) {
    expect(in, kMagic);
    const auto version = read<std::string>(in, "version");
    if (version != kVersion) malformed("unsupported version '" + version + "'");
    expect(in, "seed");
    const auto seed = read<std::uint64_t>(in, "seed");
    expect(in, "layers");
    const auto count = read<std::size_t>(in, "layer count");
    if (count > 4096) malformed("implausible layer count");

    std::vector<LayerSpec> specs(count);
    for (auto& s : specs) {
        expect(in, "layer");
        try {
            s.kind = parse_layer_kind(read<std::string>(in, "layer kind"));
            s.units = read<std::size_t>(in, "units");
            s.activation = parse_activation(read<std::string>(in, "activation"));
        } catch (const std::invalid_argument& e) {
            malformed(e.what());
        }
        s.skip = read<std::size_t>(in, "skip");
        s.l1 = parse_hex(read<std::string>(in, "l1"));
        s.l2 = parse_hex(read<std::string>(in, "l2"));
        const auto rank = read<std::size_t>(in, "shape rank");
        if (rank > 4) malformed("shape rank above 4");
        s.shape.resize(rank);
        for (auto& e : s.shape) e = read<std::size_t>(in, "shape extent");
    }

    std::vector<ParamBlock> params(count);
    for (;;) {
        const auto word = read<std::string>(in, "'params' or 'end'");
        if (word == "end") break;
        if (word != "params") malformed("unexpected '" + word + "'");
        const auto index = read<std::size_t>(in, "layer index");
        const auto rows = read<std::size_t>(in, "rows");
        const auto cols = read<std::size_t>(in, "cols");
        if (index >= count || rows == 0 || cols == 0 || rows > (1u << 24) || cols > (1u << 24))
            malformed("bad parameter block header");
        std::vector<double> w(rows * cols), b(cols);
        for (auto& v : w) v = parse_hex(read<std::string>(in, "weight"));
        for (auto& v : b) v = parse_hex(read<std::string>(in, "bias"));
        params[index] = ParamBlock{Tensor({rows, cols}, std::move(w)), Tensor({cols}, std::move(b))};
    }
    try {
        return Network(std::move(specs), std::move(params), seed);
    } catch (const std::invalid_argument& e) {
        malformed(e.what());
    }
}

void save_network(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    save_network(net, out);
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return load_network(in);
}

}  // namespace surfrank::nn
