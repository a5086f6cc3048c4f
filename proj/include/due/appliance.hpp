#pragma once

#include "due/types.hpp"

#include <iosfwd>

namespace due {

enum class ApplianceKind {
    CoffeeMaker,
    Microwave,
    Kettle,
    Oven,
    Stove,
    TV,
    TVBox,
    DVDPlayer,
    PC,
    Laptop,
    Tablet,
    Stereo,
    GamingConsole,
    FridgeFreezer,
    Fridge,
    Freezer,
    Hairdryer,
    Boiler,
    HeatPump,
    WashingMachine,
    TumbleDryer,
    Dishwasher,
    Vacuum,
    Printer,
    Lighting,
    Modem
};
inline constexpr std::size_t kApplianceCount = 26;

constexpr std::size_t index_of(ApplianceKind k) { return static_cast<std::size_t>(k); }

std::string_view to_string(ApplianceKind k);
ApplianceKind parse_appliance(std::string_view label);

bool is_cold_appliance(ApplianceKind k);

/// Per-appliance parameters. The meaning of beta1..beta3 depends on the
/// appliance family (meal probabilities for cooking, duty cycles for cold
/// appliances, first/additional use for housekeeping, ...). `tau` is the
/// mean usage duration in minutes; for cold appliances it is the length of
/// the active cooling phase.
struct ApplianceSpec {
    ApplianceKind kind = ApplianceKind::Lighting;
    Category category = Category::Light;
    double nominal_power = 0.0;
    std::optional<double> beta1;
    std::optional<double> beta2;
    std::optional<double> beta3;
    std::optional<double> tau;
    int count = 0;

    std::string_view name() const { return to_string(kind); }
    /// Throws ConfigError on non-positive power, beta outside [0,1], negative tau or count.
    void validate() const;

    friend bool operator==(const ApplianceSpec&, const ApplianceSpec&) = default;
};

/// Reference appliance table, one entry per ApplianceKind in enum order,
/// every count set to zero.
const std::vector<ApplianceSpec>& default_appliance_table();

/// CSV with header `name,category,nominal_power,beta1,beta2,beta3,tau`;
/// absent parameters are empty cells. Returns entries in file order.
std::vector<ApplianceSpec> read_appliance_table(std::istream& in);
std::vector<ApplianceSpec> load_appliance_table(const std::string& path);
void write_appliance_table(std::ostream& out, std::span<const ApplianceSpec> table);

}  // namespace due
