#pragma once

// Raw sub-metered channels to 15-min category series. Channel files are
// `<dir>/<channel>.csv` with rows `epoch_seconds,watts` (naive local time);
// an optional non-numeric header line is skipped.

#include "due/household.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>

namespace due {

struct ChannelMapping {
    std::string channel;
    std::string appliance;
    std::optional<Category> category;  // nullopt: ignored channel
};

struct ChannelMap {
    std::vector<ChannelMapping> entries;  // sorted by channel name
};

/// CSV `channel,appliance,category|ignore` with a header line. DataError on a
/// duplicate channel or an unknown category label.
ChannelMap read_channel_map(std::istream& in, std::string_view source_name = "<channel map>");
ChannelMap load_channel_map(const std::filesystem::path& path);
void write_channel_map(std::ostream& out, const ChannelMap& map);

struct RawSample {
    std::int64_t t = 0;
    double watts = 0.0;
};

/// DataError naming the line on any unparseable row or negative/non-finite power.
std::vector<RawSample> read_channel(std::istream& in, std::string_view source_name = "<channel>");
void write_channel(std::ostream& out, const SampledSeries& series);

/// Gaps up to this many measurement slots are forward-filled.
inline constexpr int kMaxFilledGap = 2;

struct BinnedChannel {
    SampledSeries series;              // 900 s
    std::vector<Date> degraded_days;   // days holding a zero-filled gap
    double filled_wh = 0.0;            // energy added by forward filling
    std::size_t zero_filled_slots = 0;
};

/// Mean of the samples falling in each 900 s slot of [start, start + days).
BinnedChannel bin_channel(std::span<const RawSample> samples, std::int64_t start, int days);

struct Dataset {
    std::map<Category, SampledSeries> categories;  // all eight, 900 s
    SampledSeries aggregate;                       // exact sum of the categories
    std::vector<Date> degraded_days;               // sorted, unique
    std::vector<std::string> warnings;

    int days() const { return static_cast<int>(aggregate.size() / kMeasurementsPerDay); }
    /// Days [first_day, first_day + n) of every series.
    Dataset slice(int first_day, int n) const;
};

/// Loads every mapped channel in parallel and merges them in channel-name
/// order. The window spans whole days from the first to the last sample.
Dataset load_channels(const std::filesystem::path& dir, const ChannelMap& map);

/// Throws InvariantError when the aggregate is not the bit-exact sum of categories.
void check_additivity(const Dataset& d);

HouseholdProfile load_household(const std::filesystem::path& path);

struct Split {
    int train_days = 0;
    int test_days = 0;
};

/// About two thirds train, one third test.
Split default_split(int total_days);
/// Contiguous train window followed by the test window. DataError when the
/// two do not fit or either is empty.
std::pair<Dataset, Dataset> split_train_test(const Dataset& d, int train_days, int test_days);

}  // namespace due
