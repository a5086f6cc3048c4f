#pragma once

#include "due/types.hpp"

namespace due {

struct SunTimes {
    double sunrise = 0.0;  // local minutes after midnight
    double sunset = 0.0;

    bool is_dark(double minute_of_day) const { return minute_of_day < sunrise || minute_of_day >= sunset; }
};

/// Sunrise and sunset from the solar declination and an approximate equation
/// of time, shifted to local clock time by `utc_offset_hours`. ConfigError for
/// |latitude| >= 66 degrees.
SunTimes sun_times(Date date, double latitude, double longitude, double utc_offset_hours);

}  // namespace due
