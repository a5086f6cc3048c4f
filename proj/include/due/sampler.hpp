#pragma once

// Random activity chains drawn from an ActivityModel by inverse-CDF sampling.

#include "due/random.hpp"
#include "due/tou_model.hpp"

#include <functional>

namespace due {

struct ChainEntry {
    ActivityState activity = ActivityState::Sleeping;
    int start_slot = 0;
    int end_slot = kSlotsPerDay;

    int start_minute() const { return start_slot * 5; }
    int end_minute() const { return end_slot * 5; }
    friend bool operator==(const ChainEntry&, const ChainEntry&) = default;
};

/// One person's day on the 5-minute grid; entries tile [0, 288).
struct ActivityChain {
    std::size_t person = 0;
    Date date{};
    std::vector<ChainEntry> entries;

    ActivityState activity_at_slot(int slot) const;
    /// Throws InvariantError unless the entries tile the day.
    void check() const;

    friend bool operator==(const ActivityChain&, const ActivityChain&) = default;
};

/// Smallest n with eps <= F(n) / F(N-1), F the running sum of `weights`.
/// ConfigError when the weights are all zero or any is negative.
std::size_t sample_discrete(std::span<const double> weights, double eps);

/// Truncated-below, grid-rounded normal duration in minutes (>= 5, multiple of 5).
int sample_duration(const DurationStats& stats, RandomSource& rng);
int sample_duration(const ActivityModel& model, const Stratum& stratum, ActivityState a, RandomSource& rng);

struct CurrentActivity {
    ActivityState activity;
    int slot;  // slot at which the next activity would start
};

/// From the initial distribution when `current` is empty, else from the
/// transition row at (activity, slot), each with the fallback chain applied.
ActivityState next_activity(const ActivityModel& model, const Stratum& stratum,
                            const std::optional<CurrentActivity>& current, RandomSource& rng);

/// Veto on a candidate episode [start_slot, end_slot). Returning false asks
/// the sampler to redraw (activity and duration) up to `kFilterRetries` times,
/// after which the last candidate is accepted.
using CandidateFilter = std::function<bool(ActivityState, int start_slot, int end_slot)>;
inline constexpr int kFilterRetries = 5;

ActivityChain generate_chain(const ActivityModel& model, const PersonProfile& person, std::size_t person_index,
                             Date date, RandomSource& rng, const CandidateFilter& filter = {});

}  // namespace due
