#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace surfrank {

/// Ordered key=value document. One pair per line; blank lines and lines
/// starting with '#' are skipped on read. Keys are written in insertion order.
class KeyValues {
public:
    void set(std::string key, std::string value);
    void set(std::string key, double value);
    void set(std::string key, long long value);
    void set(std::string key, unsigned long long value);
    void set(std::string key, int value) { set(std::move(key), static_cast<long long>(value)); }
    void set(std::string key, std::size_t value) {
        set(std::move(key), static_cast<unsigned long long>(value));
    }
    void set(std::string key, bool value) { set(std::move(key), std::string(value ? "true" : "false")); }
    void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }

    bool contains(std::string_view key) const;
    const std::string& get(std::string_view key) const;
    std::string get_or(std::string_view key, std::string fallback) const;
    double get_double(std::string_view key) const;
    unsigned long long get_u64(std::string_view key) const;
    std::vector<double> get_doubles(std::string_view key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    void write(std::ostream& os) const;
    void save(const std::filesystem::path& path) const;
    static KeyValues parse(std::istream& is);
    static KeyValues load(const std::filesystem::path& path);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

/// Comma-separated doubles via format_double.
std::string join_doubles(const std::vector<double>& values, char sep = ',');

/// Quotes a CSV field when it contains a comma, quote or line break
/// (doubling embedded quotes).
std::string csv_field(std::string_view field);

}  // namespace surfrank
