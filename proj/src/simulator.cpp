#include "due/simulator.hpp"

#include <cmath>

namespace due {

void SimulationConfig::validate() const {
    if (days < 1) throw ConfigError("simulation needs at least one day");
    if (!(unoccupied_probability >= 0.0 && unoccupied_probability <= 1.0)) {
        throw ConfigError("unoccupied_probability must lie in [0, 1]");
    }
    if (!(base_standby >= 0.0)) throw ConfigError("base_standby must be >= 0");
}

FridgeEstimate simulated_fridge(const ApplianceSpec& cold, RandomSource& rng) {
    if (!cold.tau || !cold.beta2 || !(*cold.beta2 > 0.0)) throw ConfigError("cold appliance needs tau and beta2");
    FridgeEstimate f;
    f.nominal_power = cold.nominal_power;
    f.active_duration = *cold.tau;
    f.cycle_length = std::max(5.0, 5.0 * std::round(*cold.tau / *cold.beta2 / 5.0));
    if (f.cycle_length <= f.active_duration) f.cycle_length = 5.0 * std::ceil((f.active_duration + 1.0) / 5.0);
    f.day_duty = f.active_duration / f.cycle_length;
    f.night_duty = f.day_duty;
    f.phase_offset = static_cast<double>(rng.uniform_index(static_cast<std::size_t>(f.cycle_length)));
    f.night_mean = f.nominal_power * f.night_duty;
    return f;
}

SimulationResult simulate_household(const HouseholdProfile& household, const ActivityModel& model,
                                    const SimulationConfig& config) {
    config.validate();
    household.validate();
    const RandomSource root(config.seed);
    SimulationResult out;

    const std::int64_t start = to_epoch_seconds(config.start);
    const auto minutes = static_cast<std::size_t>(config.days) * kMinutesPerDay;
    for (auto c : kAllCategories) {
        out.per_category[index_of(c)] = SampledSeries(start, kSimulationStep, std::vector<double>(minutes, 0.0));
    }

    if (const auto* cold = household.cold_appliance()) {
        auto rng = root.derive({0xF41D6E});
        out.fridge = simulated_fridge(*cold, rng);
        out.per_category[index_of(Category::Fridge)] = fridge_wave(*out.fridge, start, kSimulationStep, minutes);
    }
    const double standby = config.base_standby +
                           household.appliance(ApplianceKind::Modem).nominal_power * household.owned(ApplianceKind::Modem);
    for (auto& v : out.per_category[index_of(Category::Standby)].values) v = standby;

    WeekCounter weeks;
    for (int d = 0; d < config.days; ++d) {
        const Date date{std::chrono::sys_days(config.start) + std::chrono::days(d)};
        const auto key = static_cast<std::uint64_t>(days_since_epoch(date));
        auto day_rng = root.derive({key, 0});
        const bool occupied = !day_rng.bernoulli(config.unoccupied_probability);
        out.occupied.push_back(occupied);
        if (!occupied) continue;

        DayContext ctx(household, date, LoadBudget::unbounded(), Placement::Random, weeks.uses_for(date));
        for (std::size_t p = 0; p < household.persons.size(); ++p) {
            auto rng = root.derive({key, 1, p});
            const auto chain = generate_chain(model, household.persons[p], p, date, rng);
            recognize_all(ctx, chain, rng);
        }
        weeks.commit(date, ctx.devices.day_use_counts());
        const auto offset = static_cast<std::size_t>(d) * kMinutesPerDay;
        for (auto c : kAllCategories) {
            if (c == Category::Fridge || c == Category::Standby) continue;
            auto& dst = out.per_category[index_of(c)].values;
            const auto& src = ctx.signals[index_of(c)];
            for (std::size_t m = 0; m < src.size(); ++m) dst[offset + m] += src[m];
        }
        for (const auto& p : ctx.pulses) {
            out.pulses.push_back(p);
            out.pulse_days.push_back(date);
        }
    }

    std::vector<double> total(minutes, 0.0);
    for (const auto& s : out.per_category) {
        for (std::size_t i = 0; i < minutes; ++i) total[i] += s.values[i];
    }
    out.aggregate = SampledSeries(start, kSimulationStep, std::move(total));
    return out;
}

}  // namespace due
