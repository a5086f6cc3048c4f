#pragma once

// Time-of-use activity model: diary ingestion, event and transition tables,
// and the count-based estimators for the initial distribution, the
// slot-dependent transition tensor and the activity duration statistics.

#include "due/types.hpp"

#include <iosfwd>
#include <map>

namespace due {

/// (employment, age group, day type) cell used to stratify every estimate.
struct Stratum {
    Employment employment = Employment::FullTime;
    AgeGroup age_group = AgeGroup::AdultActive;
    DayType day_type = DayType::Weekday;

    std::size_t index() const {
        return (index_of(employment) * kAgeGroupCount + index_of(age_group)) * kDayTypeCount + index_of(day_type);
    }
    static Stratum from_index(std::size_t i);
    Stratum with_day_type(DayType d) const { return {employment, age_group, d}; }

    friend bool operator==(const Stratum&, const Stratum&) = default;
};
inline constexpr std::size_t kStratumCount = kEmploymentCount * kAgeGroupCount * kDayTypeCount;

inline Stratum stratum_of(const PersonProfile& p, DayType d) { return {p.employment, p.age_group, d}; }

/// One contiguous diary episode on the 5-minute grid: [start_slot, end_slot).
struct ActivityEvent {
    std::string person;
    Employment employment = Employment::FullTime;
    AgeGroup age_group = AgeGroup::AdultActive;
    Date date{};
    ActivityState activity = ActivityState::Sleeping;
    int start_slot = 0;
    int end_slot = kSlotsPerDay;

    DayType day_type() const { return day_type_of(date); }
    Stratum stratum() const { return {employment, age_group, day_type()}; }
    int duration_minutes() const { return (end_slot - start_slot) * 5; }

    friend bool operator==(const ActivityEvent&, const ActivityEvent&) = default;
};

/// Switch between two consecutive episodes of one diary day, at the slot
/// where the first ends and the second begins.
struct TransitionEvent {
    Employment employment = Employment::FullTime;
    AgeGroup age_group = AgeGroup::AdultActive;
    DayType day_type = DayType::Weekday;
    ActivityState from = ActivityState::Sleeping;
    ActivityState to = ActivityState::Sleeping;
    int slot = 1;

    Stratum stratum() const { return {employment, age_group, day_type}; }
};

/// Diary CSV: header `person,employment,age_group,date,activity,start,end`,
/// times as HH:MM on the 5-minute grid, `24:00` allowed as end of day.
/// Every person-day must tile 00:00-24:00 without gaps or overlaps.
std::vector<ActivityEvent> parse_diary(std::istream& in);
std::vector<ActivityEvent> load_diary(const std::string& path);
void write_diary(std::ostream& out, std::span<const ActivityEvent> events);

/// DataError naming the person and day when a person-day does not tile.
void check_tiling(std::span<const ActivityEvent> events);

std::vector<TransitionEvent> derive_transitions(std::span<const ActivityEvent> events);

using CountVector = std::array<std::uint32_t, kActivityCount>;
using ProbabilityVector = std::array<double, kActivityCount>;

/// Which level of the fallback chain produced a distribution.
enum class Fallback { Observed, PooledDayTypes, Uniform };
std::string_view to_string(Fallback f);

struct Distribution {
    ProbabilityVector p{};
    Fallback level = Fallback::Observed;
};

class InitialComponent {
public:
    void add(const Stratum& s, ActivityState a);
    bool observed(const Stratum& s) const { return totals_[s.index()] > 0; }
    const CountVector& counts(const Stratum& s) const { return counts_[s.index()]; }
    std::uint32_t total(const Stratum& s) const { return totals_[s.index()]; }
    /// Relative frequencies; nullopt for an unobserved stratum.
    std::optional<ProbabilityVector> probabilities(const Stratum& s) const;
    /// Observed, else pooled over day types, else uniform.
    Distribution resolve(const Stratum& s) const;

    friend bool operator==(const InitialComponent&, const InitialComponent&) = default;

private:
    std::array<CountVector, kStratumCount> counts_{};
    std::array<std::uint32_t, kStratumCount> totals_{};
};

class TransitionComponent {
public:
    void add(const Stratum& s, ActivityState from, ActivityState to, int slot);
    /// nullptr when no departure from `from` at `slot` was observed.
    const CountVector* counts(const Stratum& s, ActivityState from, int slot) const;
    std::optional<ProbabilityVector> row(const Stratum& s, ActivityState from, int slot) const;
    Distribution resolve(const Stratum& s, ActivityState from, int slot) const;
    std::size_t observed_rows() const { return rows_.size(); }

    /// Rows keyed by (stratum index, slot, from) in that lexicographic order.
    const std::map<std::uint32_t, CountVector>& rows() const { return rows_; }
    static std::uint32_t key(const Stratum& s, ActivityState from, int slot);

    friend bool operator==(const TransitionComponent&, const TransitionComponent&) = default;

private:
    std::map<std::uint32_t, CountVector> rows_;
};

struct DurationStats {
    std::uint32_t count = 0;
    double mean = 0.0;    // minutes
    double stddev = 0.0;  // population standard deviation, minutes
};

class DurationComponent {
public:
    void add(const Stratum& s, ActivityState a, int minutes);
    /// Raw statistics; count 0 means no samples (mean/stddev unset).
    DurationStats stats(const Stratum& s, ActivityState a) const;
    /// Observed, else pooled over day types, else pooled over every stratum,
    /// else a fixed 60 +/- 30 min default.
    std::pair<DurationStats, Fallback> resolve(const Stratum& s, ActivityState a) const;

    struct Sums {
        std::uint64_t count = 0;
        std::uint64_t sum = 0;
        std::uint64_t sum_sq = 0;
        friend bool operator==(const Sums&, const Sums&) = default;
    };
    const Sums& sums(const Stratum& s, ActivityState a) const { return cells_[s.index()][index_of(a)]; }
    void set_sums(const Stratum& s, ActivityState a, const Sums& v) { cells_[s.index()][index_of(a)] = v; }

    friend bool operator==(const DurationComponent&, const DurationComponent&) = default;

private:
    static DurationStats finish(const Sums& s);
    std::array<std::array<Sums, kActivityCount>, kStratumCount> cells_{};
};

InitialComponent estimate_initial(std::span<const ActivityEvent> events);
TransitionComponent estimate_transitions(std::span<const ActivityEvent> events);
DurationComponent estimate_durations(std::span<const ActivityEvent> events);

class ActivityModel {
public:
    ActivityModel() = default;
    ActivityModel(InitialComponent initial, TransitionComponent transitions, DurationComponent durations);

    static ActivityModel estimate(std::span<const ActivityEvent> events);

    const InitialComponent& initial() const { return initial_; }
    const TransitionComponent& transitions() const { return transitions_; }
    const DurationComponent& durations() const { return durations_; }

    /// Self-describing text format holding the raw counts, so a reloaded model
    /// reproduces every estimate exactly.
    void save(std::ostream& out) const;
    static ActivityModel load(std::istream& in);
    void save_file(const std::string& path) const;
    static ActivityModel load_file(const std::string& path);

    friend bool operator==(const ActivityModel&, const ActivityModel&) = default;

private:
    InitialComponent initial_;
    TransitionComponent transitions_;
    DurationComponent durations_;
};

// ---------------------------------------------------------------------------
// Synthetic diaries
// ---------------------------------------------------------------------------

struct StratumSize {
    Employment employment = Employment::FullTime;
    AgeGroup age_group = AgeGroup::AdultActive;
    int persons = 1;
};

struct SyntheticDiaryConfig {
    std::vector<StratumSize> strata;
    Date start{std::chrono::year{2015}, std::chrono::month{4}, std::chrono::day{6}};
    int days = 7;
    std::uint64_t seed = 42;
};

/// Deterministic license-free diary set with daily rhythms (night sleep,
/// weekday work or school, meals, evening leisure). See README.
std::vector<ActivityEvent> generate_synthetic_diary(const SyntheticDiaryConfig& config);

/// The generator's activity distribution at 00:00 for a stratum.
ProbabilityVector synthetic_midnight_distribution(Employment e, AgeGroup g, DayType d);

/// Every (employment, age group) pair with `persons` each.
SyntheticDiaryConfig full_synthetic_config(int persons_per_stratum, int days, std::uint64_t seed);

}  // namespace due
