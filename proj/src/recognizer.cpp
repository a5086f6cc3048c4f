#include "due/recognizer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace due {

namespace {

using enum ActivityState;
using K = ApplianceKind;

constexpr int kSlotMinutes = kMeasurementStep / 60;
constexpr double kBudgetSlack = 1e-9;

int episode_start(const ChainEntry& e) { return e.start_minute(); }
int episode_length(const ChainEntry& e) { return e.end_minute() - e.start_minute(); }

double habit_factor(const Habits& habits, K kind) {
    switch (kind) {
        case K::TV:
        case K::TVBox:
        case K::DVDPlayer: return usage_factor(habits.tv_usage);
        case K::PC:
        case K::Laptop:
        case K::Tablet: return usage_factor(habits.computer_usage);
        case K::Stereo: return usage_factor(habits.stereo_usage);
        case K::GamingConsole: return usage_factor(habits.console_usage);
        default: return 1.0;
    }
}

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

std::optional<int> weekly_quota(const Habits& habits, K kind) {
    switch (kind) {
        case K::WashingMachine: return habits.washing_machine_per_week;
        case K::TumbleDryer: return habits.tumble_dryer_per_week;
        case K::Dishwasher: return habits.dishwasher_per_week;
        default: return std::nullopt;
    }
}

void add_signal(DayContext& ctx, Category c, int start, int duration, double power) {
    auto& s = ctx.signals[index_of(c)];
    for (int m = start; m < start + duration; ++m) s[static_cast<std::size_t>(m)] += power;
}

// Places one pulse of `duration` minutes for a given instance somewhere in
// [win_start, win_end). Returns false when no start is free and admissible.
bool try_pulse(DayContext& ctx, const ApplianceSpec& spec, int instance, std::size_t person, int win_start,
               int win_end, int duration, RandomSource& rng) {
    win_end = std::min(win_end, kMinutesPerDay);
    if (duration <= 0 || win_end - win_start < duration) return false;
    std::vector<int> feasible;
    int best = -1;
    double best_score = -1.0;
    for (int s = win_start; s + duration <= win_end; ++s) {
        if (ctx.devices.instance_busy(spec.kind, instance, s, s + duration)) continue;
        if (!ctx.budget.admits(s, duration, spec.nominal_power)) continue;
        if (ctx.placement == Placement::Random) {
            feasible.push_back(s);
        } else {
            const double score = ctx.budget.covered(s, duration);
            if (score > best_score) {
                best_score = score;
                best = s;
            }
        }
    }
    if (ctx.placement == Placement::Random) {
        if (feasible.empty()) return false;
        best = feasible[rng.uniform_index(feasible.size())];
    }
    if (best < 0) return false;
    ctx.devices.occupy(spec.kind, instance, best, best + duration);
    ctx.clipped_wh += ctx.budget.consume(best, duration, spec.nominal_power);
    add_signal(ctx, spec.category, best, duration, spec.nominal_power);
    ctx.pulses.push_back({spec.kind, instance, person, best, duration, spec.nominal_power});
    return true;
}

// First instance (in order) that accepts the pulse; -1 when none does.
int pulse_any_instance(DayContext& ctx, const ApplianceSpec& spec, std::size_t person, int win_start, int win_end,
                       int duration, RandomSource& rng) {
    for (int i = 0; i < spec.count; ++i) {
        if (try_pulse(ctx, spec, i, person, win_start, win_end, duration, rng)) return i;
    }
    return -1;
}

const Pulse& last_pulse(const DayContext& ctx) { return ctx.pulses.back(); }

}  // namespace

// ---------------------------------------------------------------------------
// LoadBudget / DeviceState
// ---------------------------------------------------------------------------

LoadBudget::LoadBudget(std::vector<double> residual) : residual_(std::move(residual)) {
    if (residual_.size() != static_cast<std::size_t>(kMeasurementsPerDay)) {
        throw InvariantError("load budget must hold one day at 900 s");
    }
}

bool LoadBudget::admits(int start, int duration, double power) const {
    if (unbounded_) return true;
    const int end = start + duration;
    for (int k = start / kSlotMinutes; k * kSlotMinutes < end; ++k) {
        const int overlap = std::min(end, (k + 1) * kSlotMinutes) - std::max(start, k * kSlotMinutes);
        if (residual_[static_cast<std::size_t>(k)] + kBudgetSlack < power * overlap / kSlotMinutes) return false;
    }
    return true;
}

double LoadBudget::covered(int start, int duration) const {
    if (unbounded_) return 0.0;
    const int end = start + duration;
    double sum = 0.0;
    for (int k = start / kSlotMinutes; k * kSlotMinutes < end; ++k) {
        const int overlap = std::min(end, (k + 1) * kSlotMinutes) - std::max(start, k * kSlotMinutes);
        sum += residual_[static_cast<std::size_t>(k)] * overlap;
    }
    return sum;
}

double LoadBudget::consume(int start, int duration, double power) {
    if (unbounded_) return 0.0;
    const int end = start + duration;
    double clipped = 0.0;
    for (int k = start / kSlotMinutes; k * kSlotMinutes < end; ++k) {
        const int overlap = std::min(end, (k + 1) * kSlotMinutes) - std::max(start, k * kSlotMinutes);
        auto& r = residual_[static_cast<std::size_t>(k)];
        r -= power * overlap / kSlotMinutes;
        if (r < 0.0) {
            clipped += -r * kMeasurementStep / 3600.0;
            r = 0.0;
        }
    }
    return clipped;
}

double LoadBudget::window_max(int start, int end) const {
    if (unbounded_) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (int k = start / kSlotMinutes; k * kSlotMinutes < end && k < kMeasurementsPerDay; ++k) {
        m = std::max(m, residual_[static_cast<std::size_t>(k)]);
    }
    return m;
}

bool DeviceState::instance_busy(ApplianceKind k, int instance, int start, int end) const {
    const auto it = busy_.find({index_of(k), instance});
    if (it == busy_.end()) return false;
    for (const auto& b : it->second) {
        if (b.start < end && start < b.end) return true;
    }
    return false;
}

bool DeviceState::any_busy(ApplianceKind k, int start, int end) const {
    for (auto it = busy_.lower_bound({index_of(k), 0}); it != busy_.end() && it->first.first == index_of(k); ++it) {
        for (const auto& b : it->second) {
            if (b.start < end && start < b.end) return true;
        }
    }
    return false;
}

void DeviceState::occupy(ApplianceKind k, int instance, int start, int end) {
    if (instance_busy(k, instance, start, end)) {
        throw InvariantError(fmt::format("{} #{} double-booked", to_string(k), instance));
    }
    busy_[{index_of(k), instance}].push_back({start, end});
}

const std::vector<BusyInterval>& DeviceState::intervals(ApplianceKind k, int instance) const {
    static const std::vector<BusyInterval> empty;
    const auto it = busy_.find({index_of(k), instance});
    return it == busy_.end() ? empty : it->second;
}

DaySignals zero_day_signals() {
    DaySignals s;
    for (auto& v : s) v.assign(kMinutesPerDay, 0.0);
    return s;
}

DayContext::DayContext(const HouseholdProfile& h, Date d, LoadBudget b, Placement p,
                       const std::array<int, kApplianceCount>& week_uses)
    : household(&h),
      date(d),
      sun(sun_times(d, h.location.latitude, h.location.longitude, h.location.utc_offset_hours)),
      budget(std::move(b)),
      devices(week_uses),
      placement(p) {}

// ---------------------------------------------------------------------------
// Shared rules
// ---------------------------------------------------------------------------

int meal_index(int start_minute) {
    struct Window {
        int begin;
        int end;
    };
    constexpr Window windows[] = {{5 * 60, 10 * 60}, {11 * 60, 14 * 60 + 30}, {17 * 60 + 30, 21 * 60 + 30}};
    auto circular = [](int a, int b) {
        const int d = std::abs(a - b) % kMinutesPerDay;
        return std::min(d, kMinutesPerDay - d);
    };
    int best = 0;
    int best_distance = kMinutesPerDay;
    for (int i = 0; i < 3; ++i) {
        const auto& w = windows[i];
        const int distance =
            (start_minute >= w.begin && start_minute < w.end) ? 0
                                                              : std::min(circular(start_minute, w.begin),
                                                                         circular(start_minute, w.end));
        if (distance < best_distance) {
            best_distance = distance;
            best = i;
        }
    }
    return best;
}

int draw_usage_minutes(double tau, int max_minutes, RandomSource& rng) {
    if (max_minutes < 1) return 0;
    if (!(tau > 0.0)) return max_minutes;
    const auto d = std::lround(rng.normal(tau, tau / 4.0));
    return static_cast<int>(std::clamp<long>(d, 1, max_minutes));
}

double lighting_power(const HouseholdProfile& h, std::size_t person) {
    const auto& light = h.appliance(K::Lighting);
    return person == 0 ? light.nominal_power : light.nominal_power * light.beta1.value_or(1.0);
}

std::optional<double> entertainment_probability(const HouseholdProfile& h, ApplianceKind kind,
                                                ActivityState activity) {
    const auto& spec = h.appliance(kind);
    const bool owns_tv = h.owned(K::TV) > 0;
    auto in = [activity](std::initializer_list<ActivityState> list) {
        return std::find(list.begin(), list.end(), activity) != list.end();
    };
    switch (kind) {
        case K::TV:
            if (activity == WatchingTV) return spec.beta1;
            if (in({Cleaning, UsingComputer, Cooking, WashingDishes, Eating, Homework, PlayingGame, Laundry,
                    Showering})) {
                return spec.beta2;
            }
            return std::nullopt;
        case K::Stereo:
            if (activity == Music) return spec.beta1;
            if (in({Cleaning, UsingComputer, Cooking, WashingDishes, Eating, Homework, PlayingGame, Laundry,
                    Showering})) {
                return spec.beta2;
            }
            return std::nullopt;
        case K::GamingConsole:
            if (activity == PlayingGame) return spec.beta1;
            return std::nullopt;
        case K::PC:
        case K::Laptop:
            if (activity == UsingComputer) return spec.beta1;
            if (activity == Homework || activity == Working) return spec.beta2;
            if (activity == WatchingTV && !owns_tv) return spec.beta3;
            return std::nullopt;
        case K::Tablet:
            if (activity == WatchingTV && !owns_tv) return spec.beta3;
            return std::nullopt;
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Subprocesses
// ---------------------------------------------------------------------------

void recognize_heating(DayContext& ctx, const ActivityChain& chain, RandomSource& rng) {
    const auto& dryer = ctx.household->appliance(K::Hairdryer);
    if (dryer.count == 0) return;
    for (const auto& e : chain.entries) {
        if (e.activity != Showering || episode_length(e) < 5) continue;
        const bool on = rng.bernoulli(dryer.beta1.value_or(1.0));
        const int duration = draw_usage_minutes(dryer.tau.value_or(5.0), episode_length(e), rng);
        if (!on) continue;
        if (pulse_any_instance(ctx, dryer, chain.person, episode_start(e), e.end_minute(), duration, rng) >= 0) {
            ctx.devices.record_use(K::Hairdryer);
        }
    }
}

void add_lighting(DayContext& ctx, const ActivityChain& chain) {
    const double power = lighting_power(*ctx.household, chain.person);
    if (!(power > 0.0)) return;
    auto& light = ctx.signals[index_of(Category::Light)];
    for (int k = 0; k < kMeasurementsPerDay; ++k) {
        std::vector<int> minutes;
        for (int m = k * kSlotMinutes; m < (k + 1) * kSlotMinutes; ++m) {
            if (!ctx.sun.is_dark(m + 0.5)) continue;
            const auto a = chain.activity_at_slot(m / 5);
            if (a == Sleeping || a == Outdoor || a == Working) continue;
            minutes.push_back(m);
        }
        if (minutes.empty()) continue;
        const double need = power * static_cast<double>(minutes.size()) / kSlotMinutes;
        if (!ctx.budget.is_unbounded() && ctx.budget.residual()[static_cast<std::size_t>(k)] + kBudgetSlack < need) {
            continue;
        }
        for (int m : minutes) {
            ctx.clipped_wh += ctx.budget.consume(m, 1, power);
            light[static_cast<std::size_t>(m)] += power;
        }
    }
}

void recognize_cooking(DayContext& ctx, const ActivityChain& chain, RandomSource& rng) {
    const auto& h = *ctx.household;
    for (const auto& e : chain.entries) {
        if (e.activity != Cooking && e.activity != Eating) continue;
        const std::vector<K> kinds = e.activity == Cooking ? std::vector<K>{K::Stove, K::Oven, K::Microwave, K::Kettle}
                                                           : std::vector<K>{K::CoffeeMaker, K::Microwave, K::Kettle};
        std::vector<std::pair<K, int>> instances;
        for (auto k : kinds) {
            for (int i = 0; i < h.owned(k); ++i) instances.emplace_back(k, i);
        }
        rng.shuffle(std::span(instances));
        const int meal = meal_index(episode_start(e));
        const double habit = meal == 1   ? h.habits.lunches_at_home / 7.0
                             : meal == 2 ? h.habits.dinners_at_home / 7.0
                                         : 1.0;
        for (const auto& [kind, instance] : instances) {
            const auto& spec = h.appliance(kind);
            const std::optional<double> betas[] = {spec.beta1, spec.beta2, spec.beta3};
            const double beta = clamp_probability(betas[meal].value_or(0.0) * habit);
            const int duration = draw_usage_minutes(spec.tau.value_or(0.0), episode_length(e), rng);
            if (!rng.bernoulli(beta)) continue;
            if (try_pulse(ctx, spec, instance, chain.person, episode_start(e), e.end_minute(), duration, rng)) {
                ctx.devices.record_use(kind);
            }
        }
    }
}

void recognize_housekeeping(DayContext& ctx, const ActivityChain& chain, RandomSource& rng) {
    const auto& h = *ctx.household;
    auto probability = [&](K kind) {
        const auto& spec = h.appliance(kind);
        if (const auto quota = weekly_quota(h.habits, kind); quota && ctx.devices.week_uses(kind) >= *quota) return 0.0;
        const auto beta = ctx.devices.day_uses(kind) == 0 ? spec.beta1 : spec.beta2;
        return clamp_probability(beta.value_or(0.0));
    };
    for (const auto& e : chain.entries) {
        K kind;
        switch (e.activity) {
            case Cleaning: kind = K::Vacuum; break;
            case WashingDishes: kind = K::Dishwasher; break;
            case Laundry: kind = K::WashingMachine; break;
            default: continue;
        }
        const auto& spec = h.appliance(kind);
        if (spec.count == 0) continue;
        const double beta = probability(kind);
        const int duration = draw_usage_minutes(spec.tau.value_or(0.0), episode_length(e), rng);
        if (!rng.bernoulli(beta)) continue;
        if (pulse_any_instance(ctx, spec, chain.person, episode_start(e), e.end_minute(), duration, rng) < 0) continue;
        ctx.devices.record_use(kind);

        if (kind != K::WashingMachine || h.owned(K::TumbleDryer) == 0) continue;
        // The dryer can only start exactly when the washing cycle ends.
        const auto& dryer = h.appliance(K::TumbleDryer);
        const int start = last_pulse(ctx).start + last_pulse(ctx).duration;
        const double dryer_beta = probability(K::TumbleDryer);
        const int dryer_duration = draw_usage_minutes(dryer.tau.value_or(0.0), kMinutesPerDay - start, rng);
        if (dryer_duration <= 0 || !rng.bernoulli(dryer_beta)) continue;
        if (pulse_any_instance(ctx, dryer, chain.person, start, start + dryer_duration, dryer_duration, rng) >= 0) {
            ctx.devices.record_use(K::TumbleDryer);
        }
    }
}

void add_entertainment(DayContext& ctx, const ActivityChain& chain, RandomSource& rng) {
    const auto& h = *ctx.household;
    for (const auto& e : chain.entries) {
        std::vector<K> kinds;
        for (auto k : {K::TV, K::PC, K::Laptop, K::Tablet, K::Stereo, K::GamingConsole}) {
            if (h.owned(k) > 0 && entertainment_probability(h, k, e.activity)) kinds.push_back(k);
        }
        if (kinds.empty()) continue;
        rng.shuffle(std::span(kinds));
        for (auto kind : kinds) {
            const auto& spec = h.appliance(kind);
            double beta = *entertainment_probability(h, kind, e.activity);
            const bool shared_kind = kind == K::TV || kind == K::Stereo || kind == K::GamingConsole;
            if (shared_kind && spec.count > 1 && ctx.devices.any_busy(kind, episode_start(e), e.end_minute())) {
                beta = spec.beta3.value_or(beta);
            }
            beta = clamp_probability(beta * habit_factor(h.habits, kind));
            const int duration = draw_usage_minutes(spec.tau.value_or(0.0), episode_length(e), rng);
            if (!rng.bernoulli(beta)) continue;
            if (pulse_any_instance(ctx, spec, chain.person, episode_start(e), e.end_minute(), duration, rng) < 0) {
                continue;
            }
            ctx.devices.record_use(kind);
            if (kind != K::TV) continue;

            // Companions follow the TV pulse exactly.
            const Pulse tv = last_pulse(ctx);
            for (auto companion : {K::TVBox, K::DVDPlayer}) {
                const auto& c = h.appliance(companion);
                if (c.count == 0) continue;
                const auto p = e.activity == WatchingTV ? c.beta1 : c.beta2;
                if (!rng.bernoulli(clamp_probability(p.value_or(0.0)))) continue;
                if (pulse_any_instance(ctx, c, chain.person, tv.start, tv.start + tv.duration, tv.duration, rng) >= 0) {
                    ctx.devices.record_use(companion);
                }
            }
        }
    }
}

void add_ict(DayContext& ctx, const ActivityChain& chain, RandomSource& rng) {
    const auto& h = *ctx.household;
    const auto& printer = h.appliance(K::Printer);
    if (printer.count == 0) return;
    for (const auto& e : chain.entries) {
        if (e.activity != UsingComputer && e.activity != Homework && e.activity != Working) continue;
        const int start = episode_start(e);
        const int end = e.end_minute();
        std::optional<double> beta;
        if (ctx.devices.any_busy(K::PC, start, end) || ctx.devices.any_busy(K::Laptop, start, end)) {
            beta = printer.beta1;
        } else if (e.activity == Working || e.activity == Homework) {
            beta = printer.beta2;
        }
        if (!beta) continue;
        const int duration = draw_usage_minutes(printer.tau.value_or(0.0), episode_length(e), rng);
        if (!rng.bernoulli(clamp_probability(*beta))) continue;
        if (pulse_any_instance(ctx, printer, chain.person, start, end, duration, rng) >= 0) {
            ctx.devices.record_use(K::Printer);
        }
    }
}

void recognize_all(DayContext& ctx, const ActivityChain& chain, RandomSource& rng) {
    recognize_heating(ctx, chain, rng);
    add_lighting(ctx, chain);
    recognize_cooking(ctx, chain, rng);
    recognize_housekeeping(ctx, chain, rng);
    add_entertainment(ctx, chain, rng);
    add_ict(ctx, chain, rng);
}

}  // namespace due
