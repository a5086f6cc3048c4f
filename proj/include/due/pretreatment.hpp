#pragma once

// Per-day pre-treatment of the measured load: standby extraction, fridge
// pattern learning and subtraction, and peak-based occupancy detection.

#include "due/appliance.hpp"
#include "due/types.hpp"

namespace due {

struct StandbySplit {
    double standby_power = 0.0;  // watts
    SampledSeries residual;
};

/// Standby is the minimum of the day; the residual is the day minus it.
StandbySplit extract_standby(const SampledSeries& day);

/// Square-wave cold appliance model. The compressor is on during the first
/// `on_minutes` of every cycle; cycles are anchored to absolute minutes since
/// the epoch so a wave continues seamlessly across days.
struct FridgeEstimate {
    double nominal_power = 0.0;    // watts, after the night-mean update
    double cycle_length = 0.0;     // minutes
    double active_duration = 0.0;  // minutes, tau of the active cooling phase
    double phase_offset = 0.0;     // minutes, cycle start modulo cycle_length
    double day_duty = 0.0;         // beta1
    double night_duty = 0.0;       // beta2
    double night_mean = 0.0;       // fitted mean night power, watts
    int nights_used = 0;
    SampledSeries template_day;    // the wave over the first history day, 900 s

    /// On-time per cycle for the given minute of day (night uses beta2).
    double on_minutes(int minute_of_day) const;
};

/// Night window used by the duty-cycle switch: [22:00, 06:00).
bool is_night_minute(int minute_of_day);

/// Wave power (W) averaged over each step of [start, start + n*step).
SampledSeries fridge_wave(const FridgeEstimate& est, std::int64_t start, int step, std::size_t n);

/// Updated nominal power from the fridge's mean night power.
/// ConfigError when beta2 or the old power is not positive.
double update_fridge_nominal(double old_power, double beta2, double night_mean);

struct FridgeLearnOptions {
    int night_start_minute = 2 * 60 + 30;
    int night_end_minute = 5 * 60;
    double histogram_bin = 5.0;  // watts
    int min_cycle = 30;          // minutes
    int max_cycle = 180;
    int cycle_step = 5;
};

/// Learns the fridge from every night of `history` (900 s, whole days).
/// DataError when there are no night samples or the nights carry no signal;
/// ConfigError when the appliance is not a cold appliance or has no beta2/tau.
FridgeEstimate learn_fridge(const SampledSeries& history, const ApplianceSpec& cold,
                            const FridgeLearnOptions& options = {});

struct FridgeSplit {
    SampledSeries fridge;    // energy attributed to the fridge, never above the input
    SampledSeries residual;  // max(day - wave, 0)
    double phase_offset = 0.0;
    double clipped_wh = 0.0;  // wave energy that found no load to explain
};

/// Re-synchronises the wave's phase to `day` (5-min grid anchored on the
/// learned phase, fitted on the night samples of the day) and subtracts it.
FridgeSplit subtract_fridge(const SampledSeries& day, const FridgeEstimate& est);

struct Peak {
    std::size_t index = 0;
    double value = 0.0;
    friend bool operator==(const Peak&, const Peak&) = default;
};

/// Alternating min/max tracker; returns the maxima only. ConfigError if delta <= 0.
std::vector<Peak> detect_peaks(std::span<const double> values, double delta);
bool occupancy(const SampledSeries& residual, double threshold);

}  // namespace due
