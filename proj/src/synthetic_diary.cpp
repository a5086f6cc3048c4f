#include "due/random.hpp"
#include "due/tou_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace due {

namespace {

using enum ActivityState;

struct Weighted {
    ActivityState activity;
    double weight;
    int min_minutes;
    int max_minutes;
};

bool is_weekend(DayType d) { return d != DayType::Weekday; }

int slot_of(int minutes) { return std::clamp(minutes / 5, 0, kSlotsPerDay); }

// Builds one person-day as a run of episodes from slot 0 to 288.
class DayBuilder {
public:
    explicit DayBuilder(RandomSource& rng) : rng_(rng) {}

    int cursor() const { return cursor_; }
    bool full() const { return cursor_ >= kSlotsPerDay; }

    void until(ActivityState a, int end_slot) {
        end_slot = std::min(end_slot, kSlotsPerDay);
        if (end_slot <= cursor_) return;
        if (!episodes_.empty() && episodes_.back().first == a) {
            episodes_.back().second = end_slot;
        } else {
            episodes_.emplace_back(a, end_slot);
        }
        cursor_ = end_slot;
    }

    void lasting(ActivityState a, int min_minutes, int max_minutes) {
        until(a, cursor_ + std::max(1, draw_minutes(min_minutes, max_minutes) / 5));
    }

    // Weighted leisure and chores up to `end_slot`.
    void fill(std::span<const Weighted> menu, int end_slot) {
        double total = 0.0;
        for (const auto& w : menu) total += w.weight;
        while (cursor_ < std::min(end_slot, kSlotsPerDay)) {
            double u = rng_.uniform() * total;
            const Weighted* pick = &menu.back();
            for (const auto& w : menu) {
                if (u < w.weight) {
                    pick = &w;
                    break;
                }
                u -= w.weight;
            }
            until(pick->activity, std::min(end_slot, cursor_ + draw_minutes(pick->min_minutes, pick->max_minutes) / 5));
        }
    }

    // Uniform on the 5-minute grid in [lo, hi].
    int draw_minutes(int lo, int hi) {
        const auto steps = static_cast<std::size_t>((hi - lo) / 5 + 1);
        return lo + 5 * static_cast<int>(rng_.uniform_index(steps));
    }

    // Normal around `mean` minutes, on the 5-minute grid.
    int jitter(int mean, double stddev) {
        return static_cast<int>(std::lround(rng_.normal(mean, stddev) / 5.0)) * 5;
    }

    const std::vector<std::pair<ActivityState, int>>& episodes() const { return episodes_; }

private:
    RandomSource& rng_;
    int cursor_ = 0;
    std::vector<std::pair<ActivityState, int>> episodes_;
};

constexpr Weighted kAdultHome[] = {
    {WatchingTV, 3.0, 30, 120}, {UsingComputer, 2.0, 20, 90}, {Cleaning, 1.0, 20, 60}, {Laundry, 0.7, 15, 45},
    {Music, 1.0, 20, 60},       {Outdoor, 2.0, 30, 180},      {Cooking, 0.3, 15, 30}};
constexpr Weighted kTeenHome[] = {
    {PlayingGame, 3.0, 30, 120}, {UsingComputer, 2.5, 20, 90}, {WatchingTV, 2.0, 30, 90},
    {Music, 1.5, 20, 60},        {Homework, 1.0, 30, 60},      {Outdoor, 2.0, 30, 150}};
constexpr Weighted kAdultEvening[] = {
    {WatchingTV, 4.0, 30, 120}, {UsingComputer, 1.5, 20, 60}, {Music, 1.0, 20, 60}, {Cleaning, 0.3, 15, 30}};
constexpr Weighted kTeenEvening[] = {
    {PlayingGame, 2.5, 30, 90}, {WatchingTV, 2.0, 30, 90}, {UsingComputer, 2.0, 20, 60}, {Music, 1.0, 20, 45}};

void meal(DayBuilder& b, int cook_lo, int cook_hi, int eat_lo, int eat_hi) {
    b.lasting(Cooking, cook_lo, cook_hi);
    b.lasting(Eating, eat_lo, eat_hi);
}

std::vector<std::pair<ActivityState, int>> synthesize_day(Employment e, AgeGroup g, DayType d, RandomSource& rng) {
    DayBuilder b(rng);
    const bool teen = g == AgeGroup::Teenager;
    const bool weekend = is_weekend(d);
    const std::span<const Weighted> home = teen ? std::span<const Weighted>(kTeenHome) : kAdultHome;
    const std::span<const Weighted> evening = teen ? std::span<const Weighted>(kTeenEvening) : kAdultEvening;

    // Midnight: mostly asleep, some night owls.
    const auto pi = synthetic_midnight_distribution(e, g, d);
    double u = rng.uniform();
    ActivityState first = Sleeping;
    for (std::size_t i = 0; i < kActivityCount; ++i) {
        if (u < pi[i]) {
            first = from_index<ActivityState>(i);
            break;
        }
        u -= pi[i];
    }
    if (first != Sleeping) b.lasting(first, 15, 90);

    int wake = 8 * 60;
    const bool works = e == Employment::FullTime || e == Employment::PartTime;
    if (!weekend && works) wake = 6 * 60 + 30;
    if (!weekend && e == Employment::Student) wake = 7 * 60;
    if (weekend) wake = teen ? 9 * 60 + 30 : 8 * 60 + 30;
    b.until(Sleeping, slot_of(b.jitter(wake, 20.0)));

    b.lasting(Showering, 10, 20);
    meal(b, 5, 15, 10, 20);

    const int dinner = b.jitter(weekend ? 18 * 60 + 45 : 18 * 60 + 30, 25.0);
    if (!weekend && works) {
        b.lasting(Working, e == Employment::FullTime ? 480 : 240, e == Employment::FullTime ? 540 : 270);
        if (e == Employment::PartTime) {
            meal(b, 20, 40, 20, 30);
            b.fill(home, slot_of(dinner));
        } else {
            b.lasting(Outdoor, 15, 45);
            b.fill(home, slot_of(dinner));
        }
    } else if (!weekend && e == Employment::Student) {
        b.lasting(Outdoor, 360, 420);
        b.lasting(Homework, 45, 90);
        b.fill(home, slot_of(dinner));
    } else {
        b.fill(home, slot_of(b.jitter(12 * 60, 20.0)));
        meal(b, 20, 45, 20, 40);
        b.fill(home, slot_of(dinner));
    }

    meal(b, 30, 60, 20, 40);
    b.lasting(WashingDishes, 15, 30);

    const int bedtime = b.jitter(weekend ? 23 * 60 + 15 : 22 * 60 + 45, 30.0);
    b.fill(evening, slot_of(bedtime));
    b.until(Sleeping, kSlotsPerDay);
    return b.episodes();
}

}  // namespace

ProbabilityVector synthetic_midnight_distribution(Employment, AgeGroup g, DayType d) {
    ProbabilityVector p{};
    const bool weekend = is_weekend(d);
    if (g == AgeGroup::Teenager) {
        p[index_of(Sleeping)] = weekend ? 0.75 : 0.85;
        p[index_of(PlayingGame)] = weekend ? 0.10 : 0.05;
        p[index_of(UsingComputer)] = weekend ? 0.10 : 0.05;
        p[index_of(WatchingTV)] = 0.05;
    } else {
        p[index_of(Sleeping)] = weekend ? 0.80 : 0.90;
        p[index_of(WatchingTV)] = weekend ? 0.10 : 0.05;
        p[index_of(UsingComputer)] = weekend ? 0.05 : 0.03;
        p[index_of(Music)] = weekend ? 0.05 : 0.02;
    }
    return p;
}

std::vector<ActivityEvent> generate_synthetic_diary(const SyntheticDiaryConfig& config) {
    if (config.days < 0) throw ConfigError("synthetic diary: days must be >= 0");
    const RandomSource root(config.seed);
    std::vector<ActivityEvent> out;
    for (std::size_t si = 0; si < config.strata.size(); ++si) {
        const auto& s = config.strata[si];
        if (s.persons < 1) throw ConfigError("synthetic diary: every stratum needs at least one person");
        for (int p = 0; p < s.persons; ++p) {
            const auto id = fmt::format("{}-{}-{}", to_string(s.employment), to_string(s.age_group), p + 1);
            for (int day = 0; day < config.days; ++day) {
                const Date date{std::chrono::sys_days(config.start) + std::chrono::days(day)};
                auto rng = root.derive({si, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(day)});
                int start = 0;
                for (const auto& [activity, end] : synthesize_day(s.employment, s.age_group, day_type_of(date), rng)) {
                    out.push_back({id, s.employment, s.age_group, date, activity, start, end});
                    start = end;
                }
            }
        }
    }
    return out;
}

SyntheticDiaryConfig full_synthetic_config(int persons_per_stratum, int days, std::uint64_t seed) {
    SyntheticDiaryConfig c;
    c.days = days;
    c.seed = seed;
    for (std::size_t e = 0; e < kEmploymentCount; ++e) {
        for (std::size_t g = 0; g < kAgeGroupCount; ++g) {
            c.strata.push_back({from_index<Employment>(e), from_index<AgeGroup>(g), persons_per_stratum});
        }
    }
    return c;
}

}  // namespace due
