#pragma once

// Small text helpers shared by the delimited and key-value file readers.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace due {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

/// Throw DataError mentioning `what` when the text is not a number.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

/// Shortest representation that round-trips to the same double.
std::string format_number(double v);

/// `key = value` lines; `#` starts a comment. Keys are case-sensitive and
/// unique. Unknown keys are left for the caller to reject via `unused_keys`.
class KeyValueFile {
public:
    KeyValueFile() = default;
    static KeyValueFile parse(std::istream& in, std::string_view source_name);
    static KeyValueFile load(const std::filesystem::path& path);

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;
    std::string require(std::string_view key) const;

    double get_double(std::string_view key, double fallback) const;
    long long get_int(std::string_view key, long long fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;

    void set(std::string key, std::string value);
    /// Keys never read through any accessor.
    std::vector<std::string> unused_keys() const;
    const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }
    const std::string& source() const { return source_; }

private:
    std::map<std::string, std::string, std::less<>> entries_;
    mutable std::map<std::string, bool, std::less<>> used_;
    std::string source_;
};

bool parse_bool(std::string_view text, std::string_view what);

}  // namespace due
