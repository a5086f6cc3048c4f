#include "due/appliance.hpp"

#include "due/text_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>

namespace due {

namespace {

constexpr std::array<std::string_view, kApplianceCount> kApplianceLabels{
    "coffee_maker",   "microwave",    "kettle",     "oven",      "stove",          "tv",
    "tv_box",         "dvd_player",   "pc",         "laptop",    "tablet",         "stereo",
    "gaming_console", "fridge_freezer", "fridge",   "freezer",   "hairdryer",      "boiler",
    "heat_pump",      "washing_machine", "tumble_dryer", "dishwasher", "vacuum",   "printer",
    "lighting",       "modem"};

using K = ApplianceKind;
using C = Category;
constexpr auto none = std::nullopt;

std::vector<ApplianceSpec> make_defaults() {
    auto row = [](K k, C c, double p, std::optional<double> b1, std::optional<double> b2,
                  std::optional<double> b3, std::optional<double> tau) {
        return ApplianceSpec{k, c, p, b1, b2, b3, tau, 0};
    };
    return {
        row(K::CoffeeMaker, C::Cooking, 800, 0.8, 0.7, 0.5, 3),
        row(K::Microwave, C::Cooking, 1250, 0.3, 0.5, 0.4, 5),
        row(K::Kettle, C::Cooking, 1800, 0.3, 0.5, 0.8, 2),
        row(K::Oven, C::Cooking, 2400, 0.1, 0.3, 0.4, 50),
        row(K::Stove, C::Cooking, 500, 0.5, 1.0, 1.0, 30),
        row(K::TV, C::Entertainment, 124, 0.9, 0.1, 0.5, 20),
        row(K::TVBox, C::Entertainment, 20, 1.0, none, none, none),
        row(K::DVDPlayer, C::Entertainment, 80, 0.1, 0.0, 0.0, 0),
        row(K::PC, C::Entertainment, 110, 0.5, 0.1, 0.2, 30),
        row(K::Laptop, C::Entertainment, 55, 0.5, 0.2, 0.4, 20),
        row(K::Tablet, C::Entertainment, 7, none, none, 0.4, none),
        row(K::Stereo, C::Entertainment, 100, 0.9, 0.2, 0.5, 20),
        row(K::GamingConsole, C::Entertainment, 180, 0.3, 0.0, 0.1, 80),
        row(K::FridgeFreezer, C::Fridge, 94, 0.3, 0.3, none, 25),
        row(K::Fridge, C::Fridge, 66, 0.3, 0.3, none, 25),
        row(K::Freezer, C::Fridge, 62, 0.5, 0.5, none, 63),
        row(K::Hairdryer, C::Heating, 600, 0.2, none, none, none),
        row(K::Boiler, C::Heating, 2000, none, none, none, none),
        row(K::HeatPump, C::Heating, 1000, none, none, none, none),
        row(K::WashingMachine, C::Housekeeping, 406, 0.5, 0.4, none, 60),
        row(K::TumbleDryer, C::Housekeeping, 2500, 0.5, 0.0, none, 60),
        row(K::Dishwasher, C::Housekeeping, 1131, 0.4, 0.0, none, 34),
        row(K::Vacuum, C::Housekeeping, 2000, 0.5, 0.2, none, 10),
        row(K::Printer, C::ICT, 23, 0.1, 0.1, none, 5),
        row(K::Lighting, C::Light, 137, 0.25, none, none, none),
        row(K::Modem, C::Standby, 8, none, none, none, none),
    };
}

std::optional<double> parse_optional(std::string_view cell, std::string_view what, std::size_t line) {
    const auto t = trim(cell);
    if (t.empty()) return std::nullopt;
    return parse_double(t, fmt::format("{} (line {})", what, line));
}

void write_optional(std::ostream& out, const std::optional<double>& v) {
    if (v) out << format_number(*v);
}

}  // namespace

std::string_view to_string(ApplianceKind k) { return kApplianceLabels[index_of(k)]; }

ApplianceKind parse_appliance(std::string_view label) {
    for (std::size_t i = 0; i < kApplianceCount; ++i) {
        if (kApplianceLabels[i] == label) return static_cast<ApplianceKind>(i);
    }
    throw DataError(fmt::format("unknown appliance label '{}'", label));
}

bool is_cold_appliance(ApplianceKind k) {
    return k == ApplianceKind::FridgeFreezer || k == ApplianceKind::Fridge || k == ApplianceKind::Freezer;
}

void ApplianceSpec::validate() const {
    if (!(nominal_power > 0.0)) throw ConfigError(fmt::format("{}: nominal power must be positive", name()));
    for (const auto& b : {beta1, beta2, beta3}) {
        if (b && (*b < 0.0 || *b > 1.0)) throw ConfigError(fmt::format("{}: probability {} outside [0,1]", name(), *b));
    }
    if (tau && *tau < 0.0) throw ConfigError(fmt::format("{}: negative usage duration", name()));
    if (count < 0) throw ConfigError(fmt::format("{}: negative appliance count", name()));
}

const std::vector<ApplianceSpec>& default_appliance_table() {
    static const std::vector<ApplianceSpec> table = make_defaults();
    return table;
}

std::vector<ApplianceSpec> read_appliance_table(std::istream& in) {
    std::vector<ApplianceSpec> table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cells = split(t, ',');
        if (!header_seen) {
            header_seen = true;
            if (cells.size() != 7 || trim(cells[0]) != "name") {
                throw DataError("appliance table: expected header name,category,nominal_power,beta1,beta2,beta3,tau");
            }
            continue;
        }
        if (cells.size() != 7) throw DataError(fmt::format("appliance table line {}: expected 7 columns", line_no));
        ApplianceSpec spec;
        spec.kind = parse_appliance(trim(cells[0]));
        spec.category = parse_category(trim(cells[1]));
        spec.nominal_power = parse_double(trim(cells[2]), fmt::format("nominal_power (line {})", line_no));
        spec.beta1 = parse_optional(cells[3], "beta1", line_no);
        spec.beta2 = parse_optional(cells[4], "beta2", line_no);
        spec.beta3 = parse_optional(cells[5], "beta3", line_no);
        spec.tau = parse_optional(cells[6], "tau", line_no);
        spec.validate();
        table.push_back(spec);
    }
    return table;
}

std::vector<ApplianceSpec> load_appliance_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open appliance table '{}'", path));
    return read_appliance_table(in);
}

void write_appliance_table(std::ostream& out, std::span<const ApplianceSpec> table) {
    out << "name,category,nominal_power,beta1,beta2,beta3,tau\n";
    for (const auto& s : table) {
        out << s.name() << ',' << to_string(s.category) << ',' << format_number(s.nominal_power) << ',';
        write_optional(out, s.beta1);
        out << ',';
        write_optional(out, s.beta2);
        out << ',';
        write_optional(out, s.beta3);
        out << ',';
        write_optional(out, s.tau);
        out << '\n';
    }
}

}  // namespace due
