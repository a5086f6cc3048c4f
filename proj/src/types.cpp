#include "due/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>

namespace due {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryLabels{
    "Cooking", "Entertainment", "Fridge", "Heating", "Housekeeping", "ICT", "Light", "Standby"};

constexpr std::array<std::string_view, kActivityCount> kActivityLabels{
    "Cleaning", "UsingComputer", "Cooking", "WashingDishes", "Eating",   "Homework",   "PlayingGame",
    "Laundry",  "Music",         "Outdoor", "Sleeping",      "WatchingTV", "Showering", "Working"};

constexpr std::array<std::string_view, kEmploymentCount> kEmploymentLabels{
    "full-time", "part-time", "student", "retired", "unemployed"};

constexpr std::array<std::string_view, kAgeGroupCount> kAgeGroupLabels{
    "teenager", "adult-active", "senior-active", "senior-inactive"};

constexpr std::array<std::string_view, kDayTypeCount> kDayTypeLabels{"weekday", "saturday", "sunday"};

template <typename E, std::size_t N>
E parse_label(std::string_view label, const std::array<std::string_view, N>& labels, std::string_view what) {
    for (std::size_t i = 0; i < N; ++i) {
        if (labels[i] == label) return static_cast<E>(i);
    }
    throw DataError(fmt::format("unknown {} label '{}'", what, label));
}

}  // namespace

std::string_view to_string(Category c) { return kCategoryLabels[index_of(c)]; }
std::string_view to_string(ActivityState s) { return kActivityLabels[index_of(s)]; }
std::string_view to_string(Employment e) { return kEmploymentLabels[index_of(e)]; }
std::string_view to_string(AgeGroup g) { return kAgeGroupLabels[index_of(g)]; }
std::string_view to_string(DayType d) { return kDayTypeLabels[index_of(d)]; }

Category parse_category(std::string_view label) {
    return parse_label<Category>(label, kCategoryLabels, "category");
}
ActivityState parse_activity(std::string_view label) {
    return parse_label<ActivityState>(label, kActivityLabels, "activity");
}
Employment parse_employment(std::string_view label) {
    return parse_label<Employment>(label, kEmploymentLabels, "employment");
}
AgeGroup parse_age_group(std::string_view label) {
    return parse_label<AgeGroup>(label, kAgeGroupLabels, "age group");
}
DayType parse_day_type(std::string_view label) {
    return parse_label<DayType>(label, kDayTypeLabels, "day type");
}

// ---------------------------------------------------------------------------

std::int64_t days_since_epoch(Date d) {
    return std::chrono::sys_days{d}.time_since_epoch().count();
}

std::int64_t to_epoch_seconds(Date d) { return days_since_epoch(d) * kSecondsPerDay; }

Date date_of(std::int64_t t) {
    auto days = t / kSecondsPerDay;
    if (t % kSecondsPerDay < 0) --days;
    return Date{std::chrono::sys_days{std::chrono::days{days}}};
}

Date parse_date(std::string_view text) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    std::string buf(text);
    char tail = 0;
    if (std::sscanf(buf.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3) {
        throw DataError(fmt::format("invalid date '{}', expected YYYY-MM-DD", text));
    }
    Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) throw DataError(fmt::format("invalid calendar date '{}'", text));
    return date;
}

std::string format_date(Date d) {
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                       static_cast<unsigned>(d.day()));
}

std::string format_timestamp(std::int64_t t) {
    const Date d = date_of(t);
    const auto sod = t - to_epoch_seconds(d);
    return fmt::format("{} {:02d}:{:02d}:{:02d}", format_date(d), sod / 3600, (sod / 60) % 60, sod % 60);
}

DayType day_type_of(Date d) {
    const std::chrono::weekday wd{std::chrono::sys_days{d}};
    if (wd == std::chrono::Saturday) return DayType::Saturday;
    if (wd == std::chrono::Sunday) return DayType::Sunday;
    return DayType::Weekday;
}

std::int64_t week_index(Date d) {
    // 1970-01-01 was a Thursday; shift so weeks start on Monday.
    const auto days = days_since_epoch(d) + 3;
    return days >= 0 ? days / 7 : (days - 6) / 7;
}

// ---------------------------------------------------------------------------

bool is_valid_step(int step) {
    return step == kSimulationStep || step == kActivityStep || step == kMeasurementStep;
}

SampledSeries::SampledSeries(std::int64_t start_, int step_, std::vector<double> values_)
    : start(start_), step(step_), values(std::move(values_)) {
    if (!is_valid_step(step)) throw ConfigError(fmt::format("unsupported series step {} s", step));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw DataError(fmt::format("non-finite value at sample {}", i));
    }
}

double SampledSeries::energy_wh() const { return due::energy_wh(values, step); }

bool SampledSeries::is_daily() const {
    return start % kSecondsPerDay == 0 && static_cast<std::int64_t>(values.size()) * step == kSecondsPerDay;
}

double energy_wh(std::span<const double> values, int step) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * step / 3600.0;
}

SampledSeries resample(const SampledSeries& series, int target_step) {
    if (target_step <= 0 || target_step % series.step != 0) {
        throw ConfigError(
            fmt::format("cannot resample from {} s to {} s: not an integer multiple", series.step, target_step));
    }
    const std::size_t ratio = static_cast<std::size_t>(target_step / series.step);
    if (series.values.size() % ratio != 0) {
        throw ConfigError(fmt::format("series of {} samples does not divide into {} s bins", series.values.size(),
                                      target_step));
    }
    std::vector<double> out(series.values.size() / ratio);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < ratio; ++k) sum += series.values[i * ratio + k];
        out[i] = sum / static_cast<double>(ratio);
    }
    return SampledSeries{series.start, target_step, std::move(out)};
}

std::vector<SampledSeries> split_days(const SampledSeries& series) {
    if (series.start % kSecondsPerDay != 0) throw DataError("series does not start at midnight");
    const auto per_day = static_cast<std::size_t>(kSecondsPerDay / series.step);
    if (series.values.empty() || series.values.size() % per_day != 0) {
        throw DataError(fmt::format("series of {} samples at {} s does not cover whole days", series.values.size(),
                                    series.step));
    }
    std::vector<SampledSeries> days;
    days.reserve(series.values.size() / per_day);
    for (std::size_t off = 0; off < series.values.size(); off += per_day) {
        days.emplace_back(series.time_at(off), series.step,
                          std::vector<double>(series.values.begin() + static_cast<std::ptrdiff_t>(off),
                                              series.values.begin() + static_cast<std::ptrdiff_t>(off + per_day)));
    }
    return days;
}

SampledSeries concat(std::span<const SampledSeries> parts) {
    if (parts.empty()) return {};
    SampledSeries out;
    out.start = parts.front().start;
    out.step = parts.front().step;
    for (const auto& p : parts) {
        if (p.step != out.step || p.start != out.end()) throw DataError("concat: parts are not contiguous");
        out.values.insert(out.values.end(), p.values.begin(), p.values.end());
    }
    return out;
}

}  // namespace due
