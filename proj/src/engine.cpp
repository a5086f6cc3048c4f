#include "due/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace due {

namespace {

using enum ActivityState;
using K = ApplianceKind;

// Appliances whose presence an activity implies. Lighting, the stereo and
// (outside WatchingTV) the TV group are background loads and imply nothing.
std::span<const K> implied_appliances(ActivityState a) {
    static constexpr K cleaning[] = {K::Vacuum};
    static constexpr K computer[] = {K::PC, K::Laptop, K::Printer};
    static constexpr K cooking[] = {K::Stove, K::Oven, K::Microwave, K::Kettle};
    static constexpr K dishes[] = {K::Dishwasher};
    static constexpr K eating[] = {K::CoffeeMaker, K::Microwave, K::Kettle};
    static constexpr K game[] = {K::GamingConsole};
    static constexpr K laundry[] = {K::WashingMachine, K::TumbleDryer};
    static constexpr K music[] = {K::PC, K::Tablet, K::Laptop};
    static constexpr K tv[] = {K::TV, K::DVDPlayer, K::PC, K::Tablet, K::Laptop};
    static constexpr K shower[] = {K::Hairdryer};
    switch (a) {
        case Cleaning: return cleaning;
        case UsingComputer:
        case Homework: return computer;
        case Cooking: return cooking;
        case WashingDishes: return dishes;
        case Eating: return eating;
        case PlayingGame: return game;
        case Laundry: return laundry;
        case Music: return music;
        case WatchingTV: return tv;
        case Showering: return shower;
        default: return {};
    }
}

std::vector<double> to_measurement_grid(const std::vector<double>& minutes, int simulation_step) {
    SampledSeries s(0, simulation_step, minutes);
    return resample(s, kMeasurementStep).values;
}

std::uint64_t day_key(Date d) { return static_cast<std::uint64_t>(days_since_epoch(d)); }

}  // namespace

void EngineConfig::validate() const {
    if (!(tolerance > 0.0 && tolerance <= 1.0)) throw ConfigError("engine tolerance must lie in (0, 1]");
    if (max_iterations < 1) throw ConfigError("engine max_iterations must be >= 1");
    if (!(peak_delta > 0.0)) throw ConfigError("engine peak_delta must be positive");
    if (simulation_step != kSimulationStep) throw ConfigError("engine simulation_step must be 60 s");
}

EngineConfig read_engine_config(const KeyValueFile& kv, std::string_view prefix) {
    const std::string p(prefix);
    EngineConfig c;
    c.tolerance = kv.get_double(p + "tolerance", c.tolerance);
    c.max_iterations = static_cast<int>(kv.get_int(p + "max_iterations", c.max_iterations));
    c.peak_delta = kv.get_double(p + "peak_delta", c.peak_delta);
    c.simulation_step = static_cast<int>(kv.get_int(p + "simulation_step", c.simulation_step));
    if (const auto seed = kv.get(p + "seed")) {
        const auto v = parse_int(*seed, p + "seed");
        if (v < 0) throw ConfigError("seed must be non-negative");
        c.seed = static_cast<std::uint64_t>(v);
    }
    c.residual_to_standby = kv.get_bool(p + "residual_to_standby", c.residual_to_standby);
    c.validate();
    return c;
}

EngineConfig load_engine_config(const std::filesystem::path& path) {
    const auto kv = KeyValueFile::load(path);
    auto c = read_engine_config(kv);
    if (const auto unused = kv.unused_keys(); !unused.empty()) {
        throw ConfigError(fmt::format("{}: unknown key '{}'", path.string(), unused.front()));
    }
    return c;
}

bool incompatible_activity(const HouseholdProfile& h, ActivityState a, double window_max) {
    double cheapest = std::numeric_limits<double>::infinity();
    for (auto k : implied_appliances(a)) {
        if (h.owned(k) > 0) cheapest = std::min(cheapest, h.appliance(k).nominal_power);
    }
    return std::isfinite(cheapest) && cheapest > window_max;
}

std::array<int, kApplianceCount> WeekCounter::uses_for(Date d) {
    if (week_index(d) != week_) {
        week_ = week_index(d);
        uses_.fill(0);
    }
    return uses_;
}

void WeekCounter::commit(Date d, const std::array<int, kApplianceCount>& day_uses) {
    (void)uses_for(d);
    for (std::size_t i = 0; i < kApplianceCount; ++i) uses_[i] += day_uses[i];
}

DayResult disaggregate_day(const SampledSeries& day, const HouseholdProfile& household, const ActivityModel& model,
                           const EngineConfig& config, const FridgeEstimate* fridge,
                           const std::array<int, kApplianceCount>& week_uses) {
    if (day.step != kMeasurementStep || !day.is_daily()) {
        throw DataError(fmt::format("disaggregate_day expects one calendar day at 900 s, got {} samples of {} s",
                                    day.size(), day.step));
    }
    for (double v : day.values) {
        if (v < 0.0) throw DataError("measured power must be non-negative");
    }
    const Date date = date_of(day.start);
    DayResult out;
    out.diagnostics.date = date;

    const auto standby = extract_standby(day);
    out.diagnostics.standby_power = standby.standby_power;
    SampledSeries fridge_part(day.start, day.step, std::vector<double>(day.size(), 0.0));
    SampledSeries residual = standby.residual;
    if (fridge != nullptr) {
        auto split = subtract_fridge(standby.residual, *fridge);
        fridge_part = std::move(split.fridge);
        residual = std::move(split.residual);
        out.diagnostics.fridge_clipped_wh = split.clipped_wh;
    }
    out.diagnostics.target_wh = residual.energy_wh();
    out.diagnostics.occupied = occupancy(residual, config.peak_delta);

    std::optional<DayContext> accepted;
    if (out.diagnostics.occupied) {
        const RandomSource root(config.seed);
        const auto key = day_key(date);
        DayContext base(household, date, LoadBudget(residual.values), Placement::BestFit, week_uses);

        // Teenagers: unconstrained chains, recognised once.
        for (std::size_t p = 0; p < household.persons.size(); ++p) {
            if (!household.persons[p].is_teenager()) continue;
            auto rng = root.derive({key, 1, p});
            const auto chain = generate_chain(model, household.persons[p], p, date, rng);
            recognize_all(base, chain, rng);
        }

        const bool has_adults = std::any_of(household.persons.begin(), household.persons.end(),
                                            [](const PersonProfile& p) { return !p.is_teenager(); });
        if (!has_adults) {
            accepted.emplace(std::move(base));
        } else {
            const double tolerance_wh = config.tolerance * out.diagnostics.target_wh;
            double best_gap = std::numeric_limits<double>::infinity();
            for (int it = 0; it < config.max_iterations; ++it) {
                DayContext ctx = base;
                for (std::size_t p = 0; p < household.persons.size(); ++p) {
                    if (household.persons[p].is_teenager()) continue;
                    auto rng = root.derive({key, 2, static_cast<std::uint64_t>(it), p});
                    const CandidateFilter filter = [&](ActivityState a, int start_slot, int end_slot) {
                        return !incompatible_activity(household, a, ctx.budget.window_max(start_slot * 5, end_slot * 5));
                    };
                    const auto chain = generate_chain(model, household.persons[p], p, date, rng, filter);
                    recognize_all(ctx, chain, rng);
                }
                const double gap = energy_wh(ctx.budget.residual(), kMeasurementStep);
                out.diagnostics.iterations = it + 1;
                if (gap < best_gap) {
                    best_gap = gap;
                    accepted.emplace(std::move(ctx));
                }
                if (best_gap <= tolerance_wh) break;
            }
        }
    }

    // Category assembly on the measurement grid.
    const auto n = day.size();
    for (auto c : kAllCategories) out.per_category[index_of(c)] = SampledSeries(day.start, day.step, std::vector<double>(n, 0.0));
    out.per_category[index_of(Category::Fridge)] = fridge_part;
    if (accepted) {
        for (auto c : kAllCategories) {
            if (c == Category::Fridge || c == Category::Standby) continue;
            out.per_category[index_of(c)].values = to_measurement_grid(accepted->signals[index_of(c)], config.simulation_step);
        }
        out.diagnostics.budget_clipped_wh = accepted->clipped_wh;
        out.day_uses = accepted->devices.day_use_counts();
    }

    std::vector<double> leftover(n, 0.0);
    auto& standby_values = out.per_category[index_of(Category::Standby)].values;
    for (std::size_t i = 0; i < n; ++i) {
        double explained = 0.0;
        for (auto c : kAllCategories) {
            if (c != Category::Standby) explained += out.per_category[index_of(c)].values[i];
        }
        const double rest = std::max(day.values[i] - explained, 0.0);
        leftover[i] = std::max(rest - standby.standby_power, 0.0);
        standby_values[i] = config.residual_to_standby ? rest : rest - leftover[i];
    }
    out.diagnostics.residual_wh = energy_wh(leftover, kMeasurementStep);
    out.unassigned = SampledSeries(day.start, day.step,
                                   config.residual_to_standby ? std::vector<double>(n, 0.0) : std::move(leftover));
    return out;
}

DisaggregationResult disaggregate(const SampledSeries& series, const HouseholdProfile& household,
                                  const ActivityModel& model, const EngineConfig& config) {
    config.validate();
    household.validate();
    if (series.step != kMeasurementStep) throw DataError("disaggregate expects a 900 s series");
    const auto days = split_days(series);
    if (days.empty()) throw DataError("disaggregate needs at least one full day");

    DisaggregationResult result;
    if (const auto* cold = household.cold_appliance()) {
        try {
            result.fridge = learn_fridge(series, *cold);
        } catch (const DataError& e) {
            result.warnings.push_back(fmt::format("fridge not learned: {}", e.what()));
        }
    }

    std::array<std::vector<SampledSeries>, kCategoryCount> parts;
    std::vector<SampledSeries> unassigned;
    WeekCounter weeks;
    for (const auto& day : days) {
        const Date date = date_of(day.start);
        auto r = disaggregate_day(day, household, model, config, result.fridge ? &*result.fridge : nullptr,
                                  weeks.uses_for(date));
        weeks.commit(date, r.day_uses);
        for (std::size_t c = 0; c < kCategoryCount; ++c) parts[c].push_back(std::move(r.per_category[c]));
        unassigned.push_back(std::move(r.unassigned));
        result.days.push_back(r.diagnostics);
    }
    for (std::size_t c = 0; c < kCategoryCount; ++c) result.per_category[c] = concat(parts[c]);
    result.unassigned = concat(unassigned);
    return result;
}

}  // namespace due
