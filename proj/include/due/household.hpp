#pragma once

#include "due/appliance.hpp"
#include "due/types.hpp"

#include <filesystem>
#include <iosfwd>

namespace due {

enum class UsageLevel { Occasional, Normal, High };

std::string_view to_string(UsageLevel u);
UsageLevel parse_usage_level(std::string_view label);
/// Multiplier applied to the usage probabilities of the matching appliances.
double usage_factor(UsageLevel u);

struct Habits {
    /// Weekly quotas; nullopt means "no constraint".
    std::optional<int> washing_machine_per_week;
    std::optional<int> tumble_dryer_per_week;
    std::optional<int> dishwasher_per_week;
    UsageLevel computer_usage = UsageLevel::Normal;
    UsageLevel tv_usage = UsageLevel::Normal;
    UsageLevel stereo_usage = UsageLevel::Normal;
    UsageLevel console_usage = UsageLevel::Normal;
    int lunches_at_home = 7;
    int dinners_at_home = 7;

    friend bool operator==(const Habits&, const Habits&) = default;
};

struct Location {
    double latitude = 47.0;
    double longitude = 8.0;
    /// Offset of the local clock from UTC, used to place sunrise and sunset.
    double utc_offset_hours = 1.0;

    friend bool operator==(const Location&, const Location&) = default;
};

struct HouseholdProfile {
    std::vector<PersonProfile> persons;
    int children_under_10 = 0;
    Habits habits;
    /// One entry per ApplianceKind in enum order; `count` is the ownership.
    std::vector<ApplianceSpec> inventory = default_appliance_table();
    bool electrical_heating = false;
    Location location;

    const ApplianceSpec& appliance(ApplianceKind k) const { return inventory[index_of(k)]; }
    ApplianceSpec& appliance(ApplianceKind k) { return inventory[index_of(k)]; }
    int owned(ApplianceKind k) const { return inventory[index_of(k)].count; }

    /// The single cold appliance, or nullptr when none is owned.
    /// ConfigError when more than one cold appliance is owned.
    const ApplianceSpec* cold_appliance() const;

    /// ConfigError on any violated invariant.
    void validate() const;

    friend bool operator==(const HouseholdProfile&, const HouseholdProfile&) = default;
};

/// Flat key-value profile format (see README, "Household profile").
HouseholdProfile read_household(std::istream& in, std::string_view source_name = "<household>");
void write_household(std::ostream& out, const HouseholdProfile& h);

}  // namespace due
