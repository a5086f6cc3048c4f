#pragma once

// The disaggregation pipeline: per-day pre-treatment, occupancy, activity
// chain optimisation against the remaining load, and category assembly.

#include "due/household.hpp"
#include "due/pretreatment.hpp"
#include "due/recognizer.hpp"
#include "due/text_io.hpp"

namespace due {

struct EngineConfig {
    double tolerance = 0.15;  // fraction of the day's post-pretreatment residual energy
    int max_iterations = 20;
    double peak_delta = 100.0;  // watts; also the occupancy threshold
    int simulation_step = kSimulationStep;
    std::uint64_t seed = 0;
    /// Leftover residual goes to Standby (exact conservation); when false it
    /// is reported separately in DisaggregationResult::unassigned.
    bool residual_to_standby = true;

    void validate() const;
};

/// Keys: tolerance, max_iterations, peak_delta, simulation_step, seed,
/// residual_to_standby. `prefix` is prepended to every key (e.g. "engine.").
EngineConfig read_engine_config(const KeyValueFile& kv, std::string_view prefix = "");
EngineConfig load_engine_config(const std::filesystem::path& path);

struct DayDiagnostics {
    Date date{};
    bool occupied = false;
    int iterations = 0;
    double standby_power = 0.0;     // daily minimum, watts
    double target_wh = 0.0;         // residual energy after standby and fridge
    double residual_wh = 0.0;       // left unexplained and assigned to Standby
    double fridge_clipped_wh = 0.0;
    double budget_clipped_wh = 0.0;
};

using CategorySeries = std::array<SampledSeries, kCategoryCount>;

struct DisaggregationResult {
    CategorySeries per_category;  // 900 s
    SampledSeries unassigned;     // all zero unless residual_to_standby is false
    std::vector<DayDiagnostics> days;
    std::optional<FridgeEstimate> fridge;
    std::vector<std::string> warnings;

    const SampledSeries& category(Category c) const { return per_category[index_of(c)]; }
};

/// True when the household owns at least one appliance the activity needs
/// and the cheapest of them draws more than `window_max` watts.
bool incompatible_activity(const HouseholdProfile& h, ActivityState a, double window_max);

/// Weekly appliance-use counters carried from one day to the next.
class WeekCounter {
public:
    std::array<int, kApplianceCount> uses_for(Date d);
    void commit(Date d, const std::array<int, kApplianceCount>& day_uses);

private:
    std::int64_t week_ = std::numeric_limits<std::int64_t>::min();
    std::array<int, kApplianceCount> uses_{};
};

struct DayResult {
    CategorySeries per_category;  // one day, 900 s
    SampledSeries unassigned;
    DayDiagnostics diagnostics;
    std::array<int, kApplianceCount> day_uses{};
};

/// One calendar day at 900 s. `fridge` may be null (no cold appliance).
DayResult disaggregate_day(const SampledSeries& day, const HouseholdProfile& household, const ActivityModel& model,
                           const EngineConfig& config, const FridgeEstimate* fridge,
                           const std::array<int, kApplianceCount>& week_uses = {});

/// Whole-day 900 s series; learns the fridge once over the window then
/// processes each day in date order.
DisaggregationResult disaggregate(const SampledSeries& series, const HouseholdProfile& household,
                                  const ActivityModel& model, const EngineConfig& config);

}  // namespace due
