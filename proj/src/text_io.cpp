#include "due/text_io.hpp"

#include "due/types.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>

namespace due {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

double parse_double(std::string_view text, std::string_view what) {
    const auto t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw DataError(fmt::format("{}: '{}' is not a number", what, text));
    }
    return v;
}

long long parse_int(std::string_view text, std::string_view what) {
    const auto t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw DataError(fmt::format("{}: '{}' is not an integer", what, text));
    }
    return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
    const auto t = trim(text);
    if (t == "true" || t == "yes" || t == "Yes" || t == "1" || t == "on") return true;
    if (t == "false" || t == "no" || t == "No" || t == "0" || t == "off") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", what, text));
}

std::string format_number(double v) { return fmt::format("{}", v); }

KeyValueFile KeyValueFile::parse(std::istream& in, std::string_view source_name) {
    KeyValueFile kv;
    kv.source_ = std::string(source_name);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (const auto hash = t.find('#'); hash != std::string_view::npos) t = trim(t.substr(0, hash));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source_name, line_no));
        }
        std::string key(trim(t.substr(0, eq)));
        std::string value(trim(t.substr(eq + 1)));
        if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", source_name, line_no));
        if (kv.entries_.count(key) != 0) {
            throw ConfigError(fmt::format("{}:{}: duplicate key '{}'", source_name, line_no, key));
        }
        kv.entries_.emplace(std::move(key), std::move(value));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
    return parse(in, path.string());
}

bool KeyValueFile::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::optional<std::string> KeyValueFile::get(std::string_view key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    used_[it->first] = true;
    return it->second;
}

std::string KeyValueFile::require(std::string_view key) const {
    auto v = get(key);
    if (!v) throw ConfigError(fmt::format("{}: missing required key '{}'", source_, key));
    return *v;
}

double KeyValueFile::get_double(std::string_view key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        return parse_double(*v, key);
    } catch (const DataError& e) {
        throw ConfigError(fmt::format("{}: {}", source_, e.what()));
    }
}

long long KeyValueFile::get_int(std::string_view key, long long fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        return parse_int(*v, key);
    } catch (const DataError& e) {
        throw ConfigError(fmt::format("{}: {}", source_, e.what()));
    }
}

bool KeyValueFile::get_bool(std::string_view key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    return parse_bool(*v, key);
}

void KeyValueFile::set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }

std::vector<std::string> KeyValueFile::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) {
        if (used_.find(k) == used_.end()) out.push_back(k);
    }
    return out;
}

}  // namespace due
