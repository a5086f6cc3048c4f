#include "due/ingest.hpp"

#include "due/text_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <set>

namespace due {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

std::int64_t midnight_of(std::int64_t t) { return floor_div(t, kSecondsPerDay) * kSecondsPerDay; }

SampledSeries slice_series(const SampledSeries& s, int first_day, int n) {
    const auto a = static_cast<std::ptrdiff_t>(first_day) * kMeasurementsPerDay;
    const auto b = a + static_cast<std::ptrdiff_t>(n) * kMeasurementsPerDay;
    return SampledSeries(s.time_at(static_cast<std::size_t>(a)), s.step,
                         std::vector<double>(s.values.begin() + a, s.values.begin() + b));
}

}  // namespace

ChannelMap read_channel_map(std::istream& in, std::string_view source_name) {
    ChannelMap map;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (header) {
            header = false;
            if (t.starts_with("channel")) continue;
        }
        const auto f = split(t, ',');
        if (f.size() != 3) throw DataError(fmt::format("{}:{}: expected channel,appliance,category", source_name, line_no));
        ChannelMapping m{std::string(trim(f[0])), std::string(trim(f[1])), std::nullopt};
        if (m.channel.empty()) throw DataError(fmt::format("{}:{}: empty channel name", source_name, line_no));
        if (const auto c = trim(f[2]); c != "ignore") {
            try {
                m.category = parse_category(c);
            } catch (const DataError& e) {
                throw DataError(fmt::format("{}:{}: {}", source_name, line_no, e.what()));
            }
        }
        if (!seen.insert(m.channel).second) {
            throw DataError(fmt::format("{}:{}: channel '{}' mapped twice", source_name, line_no, m.channel));
        }
        map.entries.push_back(std::move(m));
    }
    std::sort(map.entries.begin(), map.entries.end(),
              [](const ChannelMapping& a, const ChannelMapping& b) { return a.channel < b.channel; });
    return map;
}

ChannelMap load_channel_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open channel map {}", path.string()));
    return read_channel_map(in, path.string());
}

void write_channel_map(std::ostream& out, const ChannelMap& map) {
    out << "channel,appliance,category\n";
    for (const auto& m : map.entries) {
        out << m.channel << ',' << m.appliance << ',' << (m.category ? to_string(*m.category) : "ignore") << '\n';
    }
}

std::vector<RawSample> read_channel(std::istream& in, std::string_view source_name) {
    std::vector<RawSample> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        if (line_no == 1 && !(std::isdigit(static_cast<unsigned char>(t.front())) || t.front() == '-')) continue;
        const auto f = split(t, ',');
        try {
            if (f.size() != 2) throw DataError("expected epoch_seconds,watts");
            RawSample s{parse_int(trim(f[0]), "timestamp"), parse_double(trim(f[1]), "watts")};
            if (!std::isfinite(s.watts) || s.watts < 0.0) throw DataError("power must be finite and non-negative");
            out.push_back(s);
        } catch (const Error& e) {
            throw DataError(fmt::format("{}:{}: {}", source_name, line_no, e.what()));
        }
    }
    return out;
}

void write_channel(std::ostream& out, const SampledSeries& series) {
    out << "epoch_seconds,watts\n";
    for (std::size_t i = 0; i < series.size(); ++i) out << series.time_at(i) << ',' << format_number(series.values[i]) << '\n';
}

BinnedChannel bin_channel(std::span<const RawSample> samples, std::int64_t start, int days) {
    const auto n = static_cast<std::size_t>(days) * kMeasurementsPerDay;
    std::vector<double> sums(n, 0.0);
    std::vector<std::size_t> counts(n, 0);
    for (const auto& s : samples) {
        if (s.t < start) continue;
        const auto k = static_cast<std::size_t>((s.t - start) / kMeasurementStep);
        if (k >= n) continue;
        sums[k] += s.watts;
        ++counts[k];
    }
    BinnedChannel out;
    std::vector<double> values(n, 0.0);
    std::set<std::size_t> degraded;
    std::size_t k = 0;
    while (k < n) {
        if (counts[k] > 0) {
            values[k] = sums[k] / static_cast<double>(counts[k]);
            ++k;
            continue;
        }
        std::size_t end = k;
        while (end < n && counts[end] == 0) ++end;
        const auto len = end - k;
        if (len <= static_cast<std::size_t>(kMaxFilledGap) && k > 0) {
            for (auto i = k; i < end; ++i) values[i] = values[k - 1];
            out.filled_wh += values[k - 1] * static_cast<double>(len) * kMeasurementStep / 3600.0;
        } else {
            out.zero_filled_slots += len;
            for (auto i = k; i < end; ++i) degraded.insert(i / kMeasurementsPerDay);
        }
        k = end;
    }
    for (auto d : degraded) out.degraded_days.push_back(date_of(start + static_cast<std::int64_t>(d) * kSecondsPerDay));
    out.series = SampledSeries(start, kMeasurementStep, std::move(values));
    return out;
}

Dataset Dataset::slice(int first_day, int n) const {
    if (first_day < 0 || n < 0 || first_day + n > days()) {
        throw DataError(fmt::format("day window [{}, {}) exceeds the {} available days", first_day, first_day + n, days()));
    }
    Dataset out;
    for (const auto& [c, s] : categories) out.categories[c] = slice_series(s, first_day, n);
    out.aggregate = slice_series(aggregate, first_day, n);
    const auto lo = date_of(out.aggregate.start);
    const auto hi = date_of(out.aggregate.start + static_cast<std::int64_t>(n) * kSecondsPerDay);
    for (auto d : degraded_days) {
        if (std::chrono::sys_days(d) >= std::chrono::sys_days(lo) && std::chrono::sys_days(d) < std::chrono::sys_days(hi)) {
            out.degraded_days.push_back(d);
        }
    }
    out.warnings = warnings;
    return out;
}

Dataset load_channels(const std::filesystem::path& dir, const ChannelMap& map) {
    std::vector<const ChannelMapping*> used;
    for (const auto& m : map.entries) {
        if (m.category) used.push_back(&m);
    }
    if (used.empty()) throw ConfigError("channel map assigns no channel to a category");

    std::vector<std::future<std::vector<RawSample>>> jobs;
    for (const auto* m : used) {
        const auto path = dir / (m->channel + ".csv");
        jobs.push_back(std::async(std::launch::async, [path] {
            std::ifstream in(path);
            if (!in) throw DataError(fmt::format("cannot open channel file {}", path.string()));
            return read_channel(in, path.string());
        }));
    }
    std::vector<std::vector<RawSample>> raw;
    for (auto& j : jobs) raw.push_back(j.get());

    std::int64_t first = std::numeric_limits<std::int64_t>::max();
    std::int64_t last = std::numeric_limits<std::int64_t>::min();
    for (const auto& r : raw) {
        for (const auto& s : r) {
            first = std::min(first, s.t);
            last = std::max(last, s.t);
        }
    }
    if (first > last) throw DataError(fmt::format("no samples in any channel under {}", dir.string()));
    const auto start = midnight_of(first);
    const int days = static_cast<int>((midnight_of(last) - start) / kSecondsPerDay) + 1;
    const auto n = static_cast<std::size_t>(days) * kMeasurementsPerDay;

    Dataset out;
    for (auto c : kAllCategories) out.categories[c] = SampledSeries(start, kMeasurementStep, std::vector<double>(n, 0.0));
    std::set<std::int64_t> degraded;
    for (std::size_t i = 0; i < used.size(); ++i) {
        if (raw[i].empty()) {
            out.warnings.push_back(fmt::format("channel '{}' is empty; using zeros", used[i]->channel));
            continue;
        }
        const auto binned = bin_channel(raw[i], start, days);
        if (binned.filled_wh > 0.0) {
            out.warnings.push_back(fmt::format("channel '{}': {} Wh forward-filled", used[i]->channel,
                                               format_number(binned.filled_wh)));
        }
        if (binned.zero_filled_slots > 0) {
            out.warnings.push_back(fmt::format("channel '{}': {} slots zero-filled", used[i]->channel,
                                               binned.zero_filled_slots));
        }
        for (auto d : binned.degraded_days) degraded.insert(days_since_epoch(d));
        auto& target = out.categories[*used[i]->category].values;
        for (std::size_t k = 0; k < n; ++k) target[k] += binned.series.values[k];
    }
    std::vector<double> agg(n, 0.0);
    for (const auto& [c, s] : out.categories) {
        for (std::size_t k = 0; k < n; ++k) agg[k] += s.values[k];
    }
    out.aggregate = SampledSeries(start, kMeasurementStep, std::move(agg));
    for (auto d : degraded) out.degraded_days.push_back(date_of(d * kSecondsPerDay));
    check_additivity(out);
    return out;
}

void check_additivity(const Dataset& d) {
    for (std::size_t k = 0; k < d.aggregate.size(); ++k) {
        double s = 0.0;
        for (const auto& [c, series] : d.categories) s += series.values.at(k);
        if (s != d.aggregate.values[k]) {
            throw InvariantError(fmt::format("aggregate differs from the category sum at slot {}", k));
        }
    }
}

HouseholdProfile load_household(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open household profile {}", path.string()));
    auto h = read_household(in, path.string());
    h.validate();
    return h;
}

Split default_split(int total_days) {
    if (total_days < 2) throw DataError("a train/test split needs at least two days");
    const int train = static_cast<int>(std::lround(2.0 * total_days / 3.0));
    return {train, total_days - train};
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, int train_days, int test_days) {
    if (train_days < 1 || test_days < 1) throw DataError("train and test windows must each cover at least one day");
    if (train_days + test_days > d.days()) {
        throw DataError(fmt::format("train ({}) + test ({}) days exceed the {} available", train_days, test_days, d.days()));
    }
    return {d.slice(0, train_days), d.slice(train_days, test_days)};
}

}  // namespace due
