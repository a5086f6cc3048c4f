#pragma once

// Shared fixtures for the unit and acceptance tests: random diaries,
// independent counting oracles for the activity model estimators, and
// hand-built chains and households for the recognizer.

#include "due/recognizer.hpp"
#include "due/random.hpp"
#include "due/tou_model.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>

namespace due::testing {

/// Random diary days that tile [0, 288); at most `max_events` events in total.
inline std::vector<ActivityEvent> random_diary(RandomSource& rng, std::size_t max_events) {
    std::vector<ActivityEvent> out;
    const Date base{std::chrono::year{2016}, std::chrono::month{3}, std::chrono::day{7}};
    int person = 0;
    while (out.size() < max_events) {
        const auto budget = max_events - out.size();
        const auto pieces = 1 + rng.uniform_index(std::min<std::size_t>(budget, 8));
        // A small pool of strata and slots so rows get repeated observations.
        const auto e = from_index<Employment>(rng.uniform_index(2));
        const auto g = from_index<AgeGroup>(rng.uniform_index(2));
        const Date date{std::chrono::sys_days(base) + std::chrono::days(rng.uniform_index(7))};
        std::vector<int> cuts;
        while (cuts.size() + 1 < pieces) {
            const int c = 12 * (1 + static_cast<int>(rng.uniform_index(23)));
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.insert(cuts.begin(), 0);
        cuts.push_back(kSlotsPerDay);
        const auto id = "p" + std::to_string(person++);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const auto a = from_index<ActivityState>(rng.uniform_index(4) * 3);
            out.push_back({id, e, g, date, a, cuts[i], cuts[i + 1]});
        }
    }
    return out;
}

using Rational = std::pair<std::uint64_t, std::uint64_t>;  // numerator, denominator

inline bool same_rational(Rational a, Rational b) { return a.first * b.second == b.first * a.second; }

/// Midnight counts per stratum, by direct scan of the events.
inline std::map<std::size_t, std::map<std::size_t, std::uint64_t>> oracle_initial(std::span<const ActivityEvent> events) {
    std::map<std::size_t, std::map<std::size_t, std::uint64_t>> out;
    for (const auto& ev : events) {
        if (ev.start_slot == 0) ++out[ev.stratum().index()][index_of(ev.activity)];
    }
    return out;
}

/// (stratum, slot, from) -> to -> count, pairing each event with the event of
/// the same person-day that starts where it ends.
inline std::map<std::tuple<std::size_t, int, std::size_t>, std::map<std::size_t, std::uint64_t>> oracle_transitions(
    std::span<const ActivityEvent> events) {
    std::map<std::tuple<std::size_t, int, std::size_t>, std::map<std::size_t, std::uint64_t>> out;
    for (const auto& a : events) {
        for (const auto& b : events) {
            if (a.person == b.person && a.date == b.date && a.end_slot == b.start_slot) {
                ++out[{a.stratum().index(), a.end_slot, index_of(a.activity)}][index_of(b.activity)];
            }
        }
    }
    return out;
}

struct Episode {
    ActivityState activity;
    int start_minute;
    int end_minute;
};

/// A full-day chain: the listed episodes (5-min aligned, sorted), Sleeping elsewhere.
inline ActivityChain make_chain(std::vector<Episode> episodes, std::size_t person = 0,
                                Date date = Date{std::chrono::year{2015}, std::chrono::month{4}, std::chrono::day{8}}) {
    ActivityChain c;
    c.person = person;
    c.date = date;
    int cursor = 0;
    for (const auto& e : episodes) {
        if (e.start_minute > cursor) c.entries.push_back({ActivityState::Sleeping, cursor / 5, e.start_minute / 5});
        c.entries.push_back({e.activity, e.start_minute / 5, e.end_minute / 5});
        cursor = e.end_minute;
    }
    if (cursor < kMinutesPerDay) c.entries.push_back({ActivityState::Sleeping, cursor / 5, kSlotsPerDay});
    c.check();
    return c;
}

/// One full-time senior-active adult owning only the listed appliances.
inline HouseholdProfile household_with(std::initializer_list<ApplianceKind> owned, std::size_t persons = 1) {
    HouseholdProfile h;
    for (std::size_t i = 0; i < persons; ++i) h.persons.push_back({Employment::FullTime, AgeGroup::SeniorActive});
    for (auto k : owned) h.appliance(k).count = 1;
    return h;
}

enum class BetaScenario { TvWhileWatching, KettleAtBreakfast, PrinterWithPc, DishwasherSecondRun };

/// Fraction of `trials` independent episodes in which the scenario's target
/// appliance is switched on, with no energy budget.
inline double activation_frequency(BetaScenario scenario, int trials, std::uint64_t seed = 1) {
    using K = ApplianceKind;
    using enum ActivityState;
    K target{};
    HouseholdProfile h;
    ActivityChain chain;
    switch (scenario) {
        case BetaScenario::TvWhileWatching:
            target = K::TV;
            h = household_with({K::TV});
            chain = make_chain({{WatchingTV, 20 * 60, 21 * 60}});
            break;
        case BetaScenario::KettleAtBreakfast:
            target = K::Kettle;
            h = household_with({K::Kettle});
            chain = make_chain({{Eating, 7 * 60 + 30, 8 * 60}});
            break;
        case BetaScenario::PrinterWithPc:
            target = K::Printer;
            h = household_with({K::PC, K::Printer});
            chain = make_chain({{UsingComputer, 14 * 60, 15 * 60}});
            break;
        case BetaScenario::DishwasherSecondRun:
            target = K::Dishwasher;
            h = household_with({K::Dishwasher});
            chain = make_chain({{WashingDishes, 19 * 60, 21 * 60}});
            break;
    }
    const RandomSource root(seed);
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        auto rng = root.derive({static_cast<std::uint64_t>(t)});
        DayContext ctx(h, chain.date, LoadBudget::unbounded(), Placement::BestFit);
        switch (scenario) {
            case BetaScenario::TvWhileWatching: add_entertainment(ctx, chain, rng); break;
            case BetaScenario::KettleAtBreakfast: recognize_cooking(ctx, chain, rng); break;
            case BetaScenario::PrinterWithPc:
                ctx.devices.occupy(K::PC, 0, 14 * 60, 15 * 60);
                add_ict(ctx, chain, rng);
                break;
            case BetaScenario::DishwasherSecondRun:
                ctx.devices.record_use(K::Dishwasher);
                recognize_housekeeping(ctx, chain, rng);
                break;
        }
        hits += ctx.devices.day_uses(target) > (scenario == BetaScenario::DishwasherSecondRun ? 1 : 0);
    }
    return static_cast<double>(hits) / trials;
}

}  // namespace due::testing
