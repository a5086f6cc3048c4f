#pragma once

// Forward load simulation: the recognizer driven by unconstrained activity
// chains against an unlimited budget, giving labelled per-category data.

#include "due/engine.hpp"

namespace due {

struct SimulationConfig {
    Date start{std::chrono::year{2015}, std::chrono::month{4}, std::chrono::day{6}};
    int days = 7;
    std::uint64_t seed = 1;
    /// Probability that nobody is home for a whole day.
    double unoccupied_probability = 0.05;
    /// Constant standby on top of the modem(s), watts.
    double base_standby = 40.0;

    void validate() const;
};

struct SimulationResult {
    CategorySeries per_category;  // 60 s ground truth
    SampledSeries aggregate;      // sum of the categories
    std::vector<bool> occupied;
    std::vector<Pulse> pulses;    // appliance pulses, minutes relative to their day
    std::vector<Date> pulse_days; // parallel to `pulses`
    std::optional<FridgeEstimate> fridge;
};

SimulationResult simulate_household(const HouseholdProfile& household, const ActivityModel& model,
                                    const SimulationConfig& config);

/// The cold appliance wave the simulator uses: cycle tau/beta2 rounded to
/// the 5-min grid, on for tau minutes per cycle, random phase.
FridgeEstimate simulated_fridge(const ApplianceSpec& cold, RandomSource& rng);

}  // namespace due
