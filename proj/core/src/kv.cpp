#include "surfrank/kv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace surfrank {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format double");
    return std::string(buf, end);
}

std::string join_doubles(const std::vector<double>& values, char sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += format_double(values[i]);
    }
    return out;
}

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void KeyValues::set(std::string key, std::string value) {
    if (key.empty() || key.find('=') != std::string::npos || key.find('\n') != std::string::npos)
        throw std::invalid_argument("invalid key '" + key + "'");
    if (value.find('\n') != std::string::npos)
        throw std::invalid_argument("value for '" + key + "' contains a line break");
    if (auto it = index_.find(key); it != index_.end()) {
        entries_[it->second].second = std::move(value);
        return;
    }
    index_.emplace(key, entries_.size());
    entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValues::set(std::string key, double value) { set(std::move(key), format_double(value)); }
void KeyValues::set(std::string key, long long value) { set(std::move(key), std::to_string(value)); }
void KeyValues::set(std::string key, unsigned long long value) {
    set(std::move(key), std::to_string(value));
}

bool KeyValues::contains(std::string_view key) const { return index_.find(key) != index_.end(); }

const std::string& KeyValues::get(std::string_view key) const {
    auto it = index_.find(key);
    if (it == index_.end()) throw std::out_of_range("missing key '" + std::string(key) + "'");
    return entries_[it->second].second;
}

std::string KeyValues::get_or(std::string_view key, std::string fallback) const {
    auto it = index_.find(key);
    return it == index_.end() ? fallback : entries_[it->second].second;
}

double KeyValues::get_double(std::string_view key) const {
    const auto& s = get(key);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("key '" + std::string(key) + "' is not a number: " + s);
    return v;
}

unsigned long long KeyValues::get_u64(std::string_view key) const {
    const auto& s = get(key);
    unsigned long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("key '" + std::string(key) + "' is not an unsigned integer: " + s);
    return v;
}

std::vector<double> KeyValues::get_doubles(std::string_view key) const {
    const auto& s = get(key);
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto end = comma == std::string::npos ? s.size() : comma;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + end, v);
        if (ec != std::errc{} || ptr != s.data() + end)
            throw std::runtime_error("key '" + std::string(key) + "' is not a number list: " + s);
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

void KeyValues::write(std::ostream& os) const {
    for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
}

void KeyValues::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write(out);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

KeyValues KeyValues::parse(std::istream& is) {
    KeyValues kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        kv.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse(in);
}

}  // namespace surfrank
