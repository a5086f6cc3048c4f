#include "due/household.hpp"

#include "due/text_io.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>

namespace due {

namespace {

constexpr std::array<std::string_view, 3> kUsageLabels{"occasional", "normal", "high"};

std::optional<int> read_quota(const KeyValueFile& kv, std::string_view key) {
    const auto v = kv.get(key);
    if (!v || *v == "unlimited") return std::nullopt;
    const auto n = parse_int(*v, key);
    if (n < 0) throw ConfigError(fmt::format("{}: must be >= 0", key));
    return static_cast<int>(n);
}

UsageLevel read_usage(const KeyValueFile& kv, std::string_view key) {
    const auto v = kv.get(key);
    return v ? parse_usage_level(*v) : UsageLevel::Normal;
}

std::string quota_text(const std::optional<int>& q) { return q ? std::to_string(*q) : std::string("unlimited"); }

}  // namespace

std::string_view to_string(UsageLevel u) { return kUsageLabels[static_cast<std::size_t>(u)]; }

UsageLevel parse_usage_level(std::string_view label) {
    for (std::size_t i = 0; i < kUsageLabels.size(); ++i) {
        if (kUsageLabels[i] == label) return static_cast<UsageLevel>(i);
    }
    throw ConfigError(fmt::format("unknown usage level '{}'", label));
}

double usage_factor(UsageLevel u) {
    switch (u) {
        case UsageLevel::Occasional: return 0.75;
        case UsageLevel::Normal: return 1.0;
        case UsageLevel::High: return 1.25;
    }
    return 1.0;
}

const ApplianceSpec* HouseholdProfile::cold_appliance() const {
    const ApplianceSpec* found = nullptr;
    for (const auto& a : inventory) {
        if (!is_cold_appliance(a.kind) || a.count == 0) continue;
        if (found != nullptr || a.count > 1) throw ConfigError("household owns more than one cold appliance");
        found = &a;
    }
    return found;
}

void HouseholdProfile::validate() const {
    if (persons.empty()) throw ConfigError("household has no persons");
    if (children_under_10 < 0) throw ConfigError("children_under_10 must be >= 0");
    for (const auto& q : {habits.washing_machine_per_week, habits.tumble_dryer_per_week, habits.dishwasher_per_week}) {
        if (q && *q < 0) throw ConfigError("weekly appliance quotas must be >= 0");
    }
    if (habits.lunches_at_home < 0 || habits.lunches_at_home > 7 || habits.dinners_at_home < 0 ||
        habits.dinners_at_home > 7) {
        throw ConfigError("lunches/dinners at home must lie in 0..7");
    }
    if (electrical_heating) throw ConfigError("electrical space or water heating is not supported");
    if (inventory.size() != kApplianceCount) throw ConfigError("inventory must list every appliance kind");
    for (std::size_t i = 0; i < inventory.size(); ++i) {
        if (index_of(inventory[i].kind) != i) throw ConfigError("inventory is not in appliance order");
        inventory[i].validate();
    }
    (void)cold_appliance();
}

HouseholdProfile read_household(std::istream& in, std::string_view source_name) {
    const auto kv = KeyValueFile::parse(in, source_name);
    HouseholdProfile h;

    const auto persons = kv.get("persons");
    if (!persons) throw ConfigError(fmt::format("{}: missing persons section", source_name));
    const auto n = parse_int(*persons, "persons");
    if (n <= 0) throw ConfigError(fmt::format("{}: persons must be positive", source_name));
    for (long long p = 1; p <= n; ++p) {
        PersonProfile person;
        person.employment = parse_employment(kv.require(fmt::format("person.{}.employment", p)));
        person.age_group = parse_age_group(kv.require(fmt::format("person.{}.age_group", p)));
        h.persons.push_back(person);
    }
    h.children_under_10 = static_cast<int>(kv.get_int("children_under_10", 0));

    h.habits.washing_machine_per_week = read_quota(kv, "habits.washing_machine_per_week");
    h.habits.tumble_dryer_per_week = read_quota(kv, "habits.tumble_dryer_per_week");
    h.habits.dishwasher_per_week = read_quota(kv, "habits.dishwasher_per_week");
    h.habits.computer_usage = read_usage(kv, "habits.computer_usage");
    h.habits.tv_usage = read_usage(kv, "habits.tv_usage");
    h.habits.stereo_usage = read_usage(kv, "habits.stereo_usage");
    h.habits.console_usage = read_usage(kv, "habits.console_usage");
    h.habits.lunches_at_home = static_cast<int>(kv.get_int("habits.lunches_at_home", 7));
    h.habits.dinners_at_home = static_cast<int>(kv.get_int("habits.dinners_at_home", 7));

    h.electrical_heating = kv.get_bool("electrical_heating", false);
    h.location.latitude = kv.get_double("location.latitude", h.location.latitude);
    h.location.longitude = kv.get_double("location.longitude", h.location.longitude);
    h.location.utc_offset_hours = kv.get_double("location.utc_offset_hours", h.location.utc_offset_hours);

    for (auto& a : h.inventory) {
        const std::string base = fmt::format("appliance.{}", a.name());
        a.count = static_cast<int>(kv.get_int(base, 0));
        a.nominal_power = kv.get_double(base + ".nominal_power", a.nominal_power);
        for (auto [suffix, field] : {std::pair{".beta1", &a.beta1}, std::pair{".beta2", &a.beta2},
                                     std::pair{".beta3", &a.beta3}, std::pair{".tau", &a.tau}}) {
            if (const auto v = kv.get(base + suffix)) *field = parse_double(*v, base + suffix);
        }
    }

    if (const auto unused = kv.unused_keys(); !unused.empty()) {
        throw ConfigError(fmt::format("{}: unknown key '{}'", source_name, unused.front()));
    }
    h.validate();
    return h;
}

void write_household(std::ostream& out, const HouseholdProfile& h) {
    out << "persons = " << h.persons.size() << '\n';
    for (std::size_t p = 0; p < h.persons.size(); ++p) {
        out << "person." << p + 1 << ".employment = " << to_string(h.persons[p].employment) << '\n';
        out << "person." << p + 1 << ".age_group = " << to_string(h.persons[p].age_group) << '\n';
    }
    out << "children_under_10 = " << h.children_under_10 << '\n';
    out << "habits.washing_machine_per_week = " << quota_text(h.habits.washing_machine_per_week) << '\n';
    out << "habits.tumble_dryer_per_week = " << quota_text(h.habits.tumble_dryer_per_week) << '\n';
    out << "habits.dishwasher_per_week = " << quota_text(h.habits.dishwasher_per_week) << '\n';
    out << "habits.computer_usage = " << to_string(h.habits.computer_usage) << '\n';
    out << "habits.tv_usage = " << to_string(h.habits.tv_usage) << '\n';
    out << "habits.stereo_usage = " << to_string(h.habits.stereo_usage) << '\n';
    out << "habits.console_usage = " << to_string(h.habits.console_usage) << '\n';
    out << "habits.lunches_at_home = " << h.habits.lunches_at_home << '\n';
    out << "habits.dinners_at_home = " << h.habits.dinners_at_home << '\n';
    out << "electrical_heating = " << (h.electrical_heating ? "yes" : "no") << '\n';
    out << "location.latitude = " << format_number(h.location.latitude) << '\n';
    out << "location.longitude = " << format_number(h.location.longitude) << '\n';
    out << "location.utc_offset_hours = " << format_number(h.location.utc_offset_hours) << '\n';

    const auto& defaults = default_appliance_table();
    for (const auto& a : h.inventory) {
        out << "appliance." << a.name() << " = " << a.count << '\n';
        const auto& d = defaults[index_of(a.kind)];
        if (a.nominal_power != d.nominal_power) {
            out << "appliance." << a.name() << ".nominal_power = " << format_number(a.nominal_power) << '\n';
        }
        for (auto [suffix, mine, ref] : {std::tuple{".beta1", a.beta1, d.beta1}, std::tuple{".beta2", a.beta2, d.beta2},
                                         std::tuple{".beta3", a.beta3, d.beta3}, std::tuple{".tau", a.tau, d.tau}}) {
            if (mine && mine != ref) out << "appliance." << a.name() << suffix << " = " << format_number(*mine) << '\n';
        }
    }
}

}  // namespace due
