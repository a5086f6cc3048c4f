#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace due {

// ---------------------------------------------------------------------------
// Errors. The CLI maps each family onto its own exit code.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration or profile files.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data that cannot be parsed or violates a data precondition.
class DataError : public Error {
public:
    using Error::Error;
};

/// An internal invariant did not hold (a bug, not a user error).
class InvariantError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Calendar
// ---------------------------------------------------------------------------

using Date = std::chrono::year_month_day;

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kSlotsPerDay = 288;        // 5-min activity grid
inline constexpr int kMeasurementsPerDay = 96;  // 15-min measurement grid

inline constexpr int kSimulationStep = 60;
inline constexpr int kActivityStep = 300;
inline constexpr int kMeasurementStep = 900;

/// Seconds since 1970-01-01 00:00 of the (timezone-naive) local midnight of `d`.
std::int64_t to_epoch_seconds(Date d);
/// Calendar date containing the naive-local timestamp `t`.
Date date_of(std::int64_t t);
std::int64_t days_since_epoch(Date d);

Date parse_date(std::string_view text);
std::string format_date(Date d);
/// "YYYY-MM-DD HH:MM:SS"
std::string format_timestamp(std::int64_t t);

enum class DayType { Weekday, Saturday, Sunday };
inline constexpr std::size_t kDayTypeCount = 3;

DayType day_type_of(Date d);
/// Monday-based week index since the epoch; two dates share a week iff equal.
std::int64_t week_index(Date d);

// ---------------------------------------------------------------------------
// Closed enumerations
// ---------------------------------------------------------------------------

enum class Category { Cooking, Entertainment, Fridge, Heating, Housekeeping, ICT, Light, Standby };
inline constexpr std::size_t kCategoryCount = 8;
inline constexpr std::array<Category, kCategoryCount> kAllCategories{
    Category::Cooking,      Category::Entertainment, Category::Fridge, Category::Heating,
    Category::Housekeeping, Category::ICT,           Category::Light,  Category::Standby};

enum class ActivityState {
    Cleaning,
    UsingComputer,
    Cooking,
    WashingDishes,
    Eating,
    Homework,
    PlayingGame,
    Laundry,
    Music,
    Outdoor,
    Sleeping,
    WatchingTV,
    Showering,
    Working
};
inline constexpr std::size_t kActivityCount = 14;

enum class Employment { FullTime, PartTime, Student, Retired, Unemployed };
inline constexpr std::size_t kEmploymentCount = 5;

enum class AgeGroup { Teenager, AdultActive, SeniorActive, SeniorInactive };
inline constexpr std::size_t kAgeGroupCount = 4;

std::string_view to_string(Category c);
std::string_view to_string(ActivityState s);
std::string_view to_string(Employment e);
std::string_view to_string(AgeGroup g);
std::string_view to_string(DayType d);

/// Parsers reject anything outside the closed label sets with DataError.
Category parse_category(std::string_view label);
ActivityState parse_activity(std::string_view label);
Employment parse_employment(std::string_view label);
AgeGroup parse_age_group(std::string_view label);
DayType parse_day_type(std::string_view label);

constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }
constexpr std::size_t index_of(ActivityState s) { return static_cast<std::size_t>(s); }
constexpr std::size_t index_of(Employment e) { return static_cast<std::size_t>(e); }
constexpr std::size_t index_of(AgeGroup g) { return static_cast<std::size_t>(g); }
constexpr std::size_t index_of(DayType d) { return static_cast<std::size_t>(d); }

template <typename E>
constexpr E from_index(std::size_t i) {
    return static_cast<E>(i);
}

struct PersonProfile {
    Employment employment = Employment::FullTime;
    AgeGroup age_group = AgeGroup::AdultActive;

    bool is_teenager() const { return age_group == AgeGroup::Teenager; }
    friend bool operator==(const PersonProfile&, const PersonProfile&) = default;
};

// ---------------------------------------------------------------------------
// SampledSeries
// ---------------------------------------------------------------------------

/// Uniformly sampled real power in watts. `start` is a naive-local timestamp
/// in seconds; `step` is one of the three grids (60, 300, 900 s).
struct SampledSeries {
    std::int64_t start = 0;
    int step = kMeasurementStep;
    std::vector<double> values;

    SampledSeries() = default;
    /// Validates the grid and that every value is finite.
    SampledSeries(std::int64_t start, int step, std::vector<double> values);

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    std::int64_t end() const { return start + static_cast<std::int64_t>(values.size()) * step; }
    std::int64_t time_at(std::size_t i) const { return start + static_cast<std::int64_t>(i) * step; }

    /// Total energy in watt-hours.
    double energy_wh() const;
    /// True when the series covers exactly one calendar day from midnight.
    bool is_daily() const;

    friend bool operator==(const SampledSeries&, const SampledSeries&) = default;
};

bool is_valid_step(int step);

/// Mean-resample to a coarser grid. `target_step` must be an integer multiple
/// of `series.step` and the length must divide evenly; otherwise ConfigError.
SampledSeries resample(const SampledSeries& series, int target_step);

/// Splits a midnight-aligned series into whole days. DataError when the series
/// does not start at midnight or does not cover an integer number of days.
std::vector<SampledSeries> split_days(const SampledSeries& series);

/// Concatenates contiguous series sharing one step.
SampledSeries concat(std::span<const SampledSeries> parts);

/// Sum of energy (Wh) in a plain vector sampled at `step` seconds.
double energy_wh(std::span<const double> values, int step);

}  // namespace due
