#include "due/solar.hpp"

#include <cmath>
#include <numbers>

namespace due {

SunTimes sun_times(Date date, double latitude, double longitude, double utc_offset_hours) {
    if (!(std::abs(latitude) < 66.0)) throw ConfigError("sunrise model does not cover polar latitudes (|lat| >= 66)");
    if (!(std::abs(longitude) <= 180.0)) throw ConfigError("longitude must lie in [-180, 180]");
    using std::cos;
    using std::sin;
    constexpr double pi = std::numbers::pi;
    constexpr double deg = pi / 180.0;

    const auto jan1 = std::chrono::sys_days(date.year() / std::chrono::January / 1);
    const auto day_of_year = (std::chrono::sys_days(date) - jan1).count() + 1;
    const double g = 2.0 * pi / (date.year().is_leap() ? 366.0 : 365.0) * static_cast<double>(day_of_year - 1);

    const double eq_time = 229.18 * (0.000075 + 0.001868 * cos(g) - 0.032077 * sin(g) - 0.014615 * cos(2 * g) -
                                     0.040849 * sin(2 * g));
    const double decl = 0.006918 - 0.399912 * cos(g) + 0.070257 * sin(g) - 0.006758 * cos(2 * g) +
                        0.000907 * sin(2 * g) - 0.002697 * cos(3 * g) + 0.00148 * sin(3 * g);

    // 90.833 degrees: geometric horizon plus refraction and the solar disc.
    const double lat = latitude * deg;
    const double arg = cos(90.833 * deg) / (cos(lat) * cos(decl)) - std::tan(lat) * std::tan(decl);
    if (arg <= -1.0 || arg >= 1.0) throw ConfigError("no sunrise or sunset on this date at this latitude");
    const double hour_angle = std::acos(arg) / deg;

    const double noon_utc = 720.0 - 4.0 * longitude - eq_time;
    const double offset = utc_offset_hours * 60.0;
    return {noon_utc - 4.0 * hour_angle + offset, noon_utc + 4.0 * hour_angle + offset};
}

}  // namespace due
