#include "due/sampler.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace due {

ActivityState ActivityChain::activity_at_slot(int slot) const {
    for (const auto& e : entries) {
        if (slot >= e.start_slot && slot < e.end_slot) return e.activity;
    }
    throw InvariantError(fmt::format("activity chain has no entry for slot {}", slot));
}

void ActivityChain::check() const {
    int cursor = 0;
    for (const auto& e : entries) {
        if (e.start_slot != cursor || e.end_slot <= e.start_slot) {
            throw InvariantError(fmt::format("activity chain broken at slot {}", cursor));
        }
        cursor = e.end_slot;
    }
    if (cursor != kSlotsPerDay) throw InvariantError("activity chain does not reach the end of the day");
}

std::size_t sample_discrete(std::span<const double> weights, double eps) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ConfigError("sample_discrete: negative or NaN weight");
        total += w;
    }
    if (total <= 0.0) throw ConfigError("sample_discrete: all weights are zero");
    double running = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        running += weights[n];
        if (eps <= running / total) return n;
    }
    // Rounding left the last cumulative ratio just below eps: take the last
    // index carrying weight.
    for (std::size_t n = weights.size(); n-- > 0;) {
        if (weights[n] > 0.0) return n;
    }
    return weights.size() - 1;
}

int sample_duration(const DurationStats& stats, RandomSource& rng) {
    const double draw = stats.stddev > 0.0 ? rng.normal(stats.mean, stats.stddev) : stats.mean;
    const auto rounded = static_cast<int>(std::lround(draw / 5.0)) * 5;
    return std::max(5, rounded);
}

int sample_duration(const ActivityModel& model, const Stratum& stratum, ActivityState a, RandomSource& rng) {
    return sample_duration(model.durations().resolve(stratum, a).first, rng);
}

ActivityState next_activity(const ActivityModel& model, const Stratum& stratum,
                            const std::optional<CurrentActivity>& current, RandomSource& rng) {
    const Distribution dist = current ? model.transitions().resolve(stratum, current->activity, current->slot)
                                      : model.initial().resolve(stratum);
    return from_index<ActivityState>(sample_discrete(dist.p, rng.uniform()));
}

ActivityChain generate_chain(const ActivityModel& model, const PersonProfile& person, std::size_t person_index,
                             Date date, RandomSource& rng, const CandidateFilter& filter) {
    ActivityChain chain;
    chain.person = person_index;
    chain.date = date;
    const auto stratum = stratum_of(person, day_type_of(date));
    std::optional<CurrentActivity> current;
    int slot = 0;
    while (slot < kSlotsPerDay) {
        ActivityState a{};
        int end = slot;
        for (int attempt = 0; attempt <= kFilterRetries; ++attempt) {
            a = next_activity(model, stratum, current, rng);
            end = std::min(kSlotsPerDay, slot + sample_duration(model, stratum, a, rng) / 5);
            if (!filter || filter(a, slot, end)) break;
        }
        chain.entries.push_back({a, slot, end});
        slot = end;
        current = CurrentActivity{a, slot};
    }
    return chain;
}

}  // namespace due
