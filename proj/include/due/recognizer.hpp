#pragma once

// Appliance recognition for one person's activity chain against the
// remaining load. Each subprocess places rectangular pulses at nominal power
// on the 60 s grid and removes them from the budget.

#include "due/household.hpp"
#include "due/random.hpp"
#include "due/sampler.hpp"
#include "due/solar.hpp"

#include <map>

namespace due {

/// Remaining unexplained load on the 900 s grid, or no limit at all (used
/// when the recognizer runs as a forward simulator).
class LoadBudget {
public:
    static LoadBudget unbounded() { return LoadBudget(); }
    explicit LoadBudget(std::vector<double> residual);

    bool is_unbounded() const { return unbounded_; }
    const std::vector<double>& residual() const { return residual_; }

    /// A pulse of `power` over minutes [start, start + duration) is admissible
    /// iff every touched slot k keeps residual[k] >= power * overlap_k / 15.
    bool admits(int start, int duration, double power) const;
    /// Residual energy (W*min) inside the window; used to rank placements.
    double covered(int start, int duration) const;
    /// Subtracts the pulse, clipping at zero; returns the clipped amount (Wh).
    double consume(int start, int duration, double power);
    /// Highest residual over the slots touching [start, end).
    double window_max(int start, int end) const;

private:
    LoadBudget() : unbounded_(true) {}
    bool unbounded_ = false;
    std::vector<double> residual_;
};

struct BusyInterval {
    int start = 0;  // minute of day
    int end = 0;    // exclusive
};

/// Which appliances are running, and how often each kind has been used
/// today and this week.
class DeviceState {
public:
    DeviceState() = default;
    /// `week_uses` holds the uses already committed earlier in the same week.
    explicit DeviceState(const std::array<int, kApplianceCount>& week_uses) : week_before_(week_uses) {}

    bool instance_busy(ApplianceKind k, int instance, int start, int end) const;
    bool any_busy(ApplianceKind k, int start, int end) const;
    void occupy(ApplianceKind k, int instance, int start, int end);
    void record_use(ApplianceKind k) { ++day_uses_[index_of(k)]; }
    const std::vector<BusyInterval>& intervals(ApplianceKind k, int instance) const;

    int day_uses(ApplianceKind k) const { return day_uses_[index_of(k)]; }
    int week_uses(ApplianceKind k) const { return week_before_[index_of(k)] + day_uses_[index_of(k)]; }
    const std::array<int, kApplianceCount>& day_use_counts() const { return day_uses_; }

private:
    std::map<std::pair<std::size_t, int>, std::vector<BusyInterval>> busy_;
    std::array<int, kApplianceCount> day_uses_{};
    std::array<int, kApplianceCount> week_before_{};
};

enum class Placement {
    BestFit,  // the admissible start covering the most residual energy (earliest on ties)
    Random,   // uniform over admissible starts
};

struct Pulse {
    ApplianceKind kind = ApplianceKind::Lighting;
    int instance = 0;
    std::size_t person = 0;
    int start = 0;     // minute of day
    int duration = 0;  // minutes
    double power = 0.0;
};

/// Per-category power at 60 s for one day.
using DaySignals = std::array<std::vector<double>, kCategoryCount>;
DaySignals zero_day_signals();

struct DayContext {
    const HouseholdProfile* household = nullptr;
    Date date{};
    SunTimes sun;
    LoadBudget budget = LoadBudget::unbounded();
    DeviceState devices;
    Placement placement = Placement::BestFit;
    DaySignals signals = zero_day_signals();
    std::vector<Pulse> pulses;
    double clipped_wh = 0.0;

    DayContext(const HouseholdProfile& h, Date d, LoadBudget b, Placement p,
               const std::array<int, kApplianceCount>& week_uses = {});
};

/// Breakfast, lunch or dinner (0, 1, 2) for an episode starting at this
/// minute: 05:00-10:00, 11:00-14:30, 17:30-21:30, else the nearest window.
int meal_index(int start_minute);

/// Usage duration in minutes: normal(tau, tau/4) rounded, clamped to [1, max_minutes].
int draw_usage_minutes(double tau, int max_minutes, RandomSource& rng);

/// Activation probability of `kind` during an episode of `activity`, before
/// habits and instance rules; nullopt when the appliance is not eligible.
std::optional<double> entertainment_probability(const HouseholdProfile& h, ApplianceKind kind,
                                                ActivityState activity);

void recognize_heating(DayContext& ctx, const ActivityChain& chain, RandomSource& rng);
void add_lighting(DayContext& ctx, const ActivityChain& chain);
void recognize_cooking(DayContext& ctx, const ActivityChain& chain, RandomSource& rng);
void recognize_housekeeping(DayContext& ctx, const ActivityChain& chain, RandomSource& rng);
void add_entertainment(DayContext& ctx, const ActivityChain& chain, RandomSource& rng);
void add_ict(DayContext& ctx, const ActivityChain& chain, RandomSource& rng);

/// Heating, Light, Cooking, Housekeeping, Entertainment, ICT, in that order.
void recognize_all(DayContext& ctx, const ActivityChain& chain, RandomSource& rng);

/// Lighting power for the person at this position in the household.
double lighting_power(const HouseholdProfile& h, std::size_t person);

}  // namespace due
