#include "due/pretreatment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace due {

namespace {

double positive_mod(double x, double m) {
    const double r = std::fmod(x, m);
    return r < 0.0 ? r + m : r;
}

constexpr int kMeasurementMinutes = kMeasurementStep / 60;

struct Moments {
    double cov = 0.0;
    double var = 0.0;
};

// Centered cross moments of x and w.
Moments centered(std::span<const double> x, std::span<const double> w) {
    double mx = 0.0;
    double mw = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        mw += w[i];
    }
    mx /= static_cast<double>(x.size());
    mw /= static_cast<double>(x.size());
    Moments m;
    for (std::size_t i = 0; i < x.size(); ++i) {
        m.cov += (x[i] - mx) * (w[i] - mw);
        m.var += (w[i] - mw) * (w[i] - mw);
    }
    return m;
}

double centered_ss(std::span<const double> x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss;
}

}  // namespace

StandbySplit extract_standby(const SampledSeries& day) {
    if (day.empty()) throw DataError("extract_standby: empty day");
    StandbySplit out;
    out.standby_power = *std::min_element(day.values.begin(), day.values.end());
    std::vector<double> residual(day.values);
    for (auto& v : residual) v -= out.standby_power;
    out.residual = SampledSeries(day.start, day.step, std::move(residual));
    return out;
}

bool is_night_minute(int minute_of_day) { return minute_of_day < 6 * 60 || minute_of_day >= 22 * 60; }

double FridgeEstimate::on_minutes(int minute_of_day) const {
    return (is_night_minute(minute_of_day) ? night_duty : day_duty) * cycle_length;
}

SampledSeries fridge_wave(const FridgeEstimate& est, std::int64_t start, int step, std::size_t n) {
    if (!is_valid_step(step) || start % 60 != 0) throw ConfigError("fridge_wave: start and step must be whole minutes");
    std::vector<double> values(n, 0.0);
    if (est.cycle_length <= 0.0 || est.nominal_power <= 0.0) return SampledSeries(start, step, std::move(values));
    const int minutes = step / 60;
    const std::int64_t first_minute = start / 60;
    for (std::size_t i = 0; i < n; ++i) {
        int on = 0;
        for (int k = 0; k < minutes; ++k) {
            const std::int64_t m = first_minute + static_cast<std::int64_t>(i) * minutes + k;
            const int minute_of_day = static_cast<int>(((m % kMinutesPerDay) + kMinutesPerDay) % kMinutesPerDay);
            const double pos = positive_mod(static_cast<double>(m) - est.phase_offset, est.cycle_length);
            if (pos < est.on_minutes(minute_of_day)) ++on;
        }
        values[i] = est.nominal_power * on / minutes;
    }
    return SampledSeries(start, step, std::move(values));
}

double update_fridge_nominal(double old_power, double beta2, double night_mean) {
    if (!(beta2 > 0.0)) throw ConfigError("fridge night duty cycle (beta2) must be positive");
    if (!(old_power > 0.0)) throw ConfigError("fridge nominal power must be positive");
    return old_power * (night_mean / (old_power * beta2));
}

FridgeEstimate learn_fridge(const SampledSeries& history, const ApplianceSpec& cold,
                            const FridgeLearnOptions& options) {
    if (!is_cold_appliance(cold.kind)) throw ConfigError(fmt::format("{} is not a cold appliance", cold.name()));
    if (!cold.beta2 || !(*cold.beta2 > 0.0)) throw ConfigError("fridge night duty cycle (beta2) must be positive");
    if (!cold.tau || !(*cold.tau > 0.0)) throw ConfigError("fridge active cooling duration (tau) must be positive");
    if (history.step != kMeasurementStep) throw ConfigError("learn_fridge expects a 900 s series");
    if (options.night_end_minute <= options.night_start_minute || options.cycle_step <= 0 ||
        options.histogram_bin <= 0.0) {
        throw ConfigError("learn_fridge: invalid options");
    }
    const auto days = history.empty() ? std::vector<SampledSeries>{} : split_days(history);

    // Standby-free night samples, one vector per night.
    const int first_bin = (options.night_start_minute + kMeasurementMinutes - 1) / kMeasurementMinutes;
    const int last_bin = options.night_end_minute / kMeasurementMinutes;  // exclusive
    struct Night {
        std::int64_t start_minute;  // absolute minute of the first night sample
        std::vector<double> samples;
        double mean;
    };
    std::vector<Night> nights;
    for (const auto& day : days) {
        if (last_bin <= first_bin) break;
        const double standby = *std::min_element(day.values.begin(), day.values.end());
        Night n{day.start / 60 + first_bin * kMeasurementMinutes, {}, 0.0};
        for (int b = first_bin; b < last_bin; ++b) n.samples.push_back(day.values[static_cast<std::size_t>(b)] - standby);
        for (double v : n.samples) n.mean += v;
        n.mean /= static_cast<double>(n.samples.size());
        nights.push_back(std::move(n));
    }
    if (nights.empty()) throw DataError("learn_fridge: no night samples in the history");

    // Histogram of night means; the most populated bin and its neighbours are
    // the quiet nights the cycle is fitted on.
    std::map<long long, int> histogram;
    for (const auto& n : nights) ++histogram[static_cast<long long>(std::floor(n.mean / options.histogram_bin))];
    const auto largest = std::max_element(histogram.begin(), histogram.end(),
                                          [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<const Night*> quiet;
    for (const auto& n : nights) {
        const auto bin = static_cast<long long>(std::floor(n.mean / options.histogram_bin));
        if (std::llabs(bin - largest->first) <= 1) quiet.push_back(&n);
    }
    double peak = 0.0;
    for (const auto* n : quiet) {
        for (double v : n->samples) peak = std::max(peak, v);
    }
    if (peak <= 1e-9) throw DataError("learn_fridge: the nights carry no fridge signal");

    const double tau = *cold.tau;
    const std::size_t samples = quiet.front()->samples.size();
    std::vector<double> night_ss;
    for (const auto* n : quiet) night_ss.push_back(centered_ss(n->samples));

    struct Fit {
        double sse = std::numeric_limits<double>::infinity();
        int cycle = 0;
        double amplitude = 0.0;
        int phase = 0;  // absolute minute of a cycle start, modulo the cycle
    } best;

    // One continuous wave across all quiet nights: a single phase anchored
    // to absolute minutes, a pooled amplitude and a free offset per night
    // (the day minimum may already hold part of the fridge's draw).
    std::vector<double> wave(samples);
    std::vector<Moments> moments(quiet.size());
    for (int cycle = options.min_cycle; cycle <= options.max_cycle; cycle += options.cycle_step) {
        if (cycle <= tau) continue;
        for (int phase = 0; phase < cycle; ++phase) {
            double cov = 0.0;
            double var = 0.0;
            for (std::size_t n = 0; n < quiet.size(); ++n) {
                for (std::size_t j = 0; j < samples; ++j) {
                    int on = 0;
                    for (int k = 0; k < kMeasurementMinutes; ++k) {
                        const auto m = quiet[n]->start_minute + static_cast<std::int64_t>(j) * kMeasurementMinutes + k;
                        if (static_cast<double>(((m - phase) % cycle + cycle) % cycle) < tau) ++on;
                    }
                    wave[j] = static_cast<double>(on) / kMeasurementMinutes;
                }
                moments[n] = centered(quiet[n]->samples, wave);
                cov += moments[n].cov;
                var += moments[n].var;
            }
            if (var <= 0.0 || cov <= 0.0) continue;
            const double amplitude = cov / var;
            double sse = 0.0;
            for (std::size_t n = 0; n < quiet.size(); ++n) {
                sse += night_ss[n] + amplitude * amplitude * moments[n].var - 2.0 * amplitude * moments[n].cov;
            }
            if (sse < best.sse - 1e-9 * (1.0 + std::abs(sse))) best = {sse, cycle, amplitude, phase};
        }
    }
    if (best.cycle == 0) throw DataError("learn_fridge: no cycle length fits the night signal");

    FridgeEstimate est;
    est.cycle_length = best.cycle;
    est.active_duration = tau;
    est.night_duty = *cold.beta2;
    est.day_duty = cold.beta1.value_or(*cold.beta2);
    est.night_mean = best.amplitude * tau / best.cycle;
    est.nominal_power = update_fridge_nominal(cold.nominal_power, *cold.beta2, est.night_mean);
    est.phase_offset = static_cast<double>(best.phase);
    est.nights_used = static_cast<int>(quiet.size());
    if (!(est.nominal_power > 0.0)) throw DataError("learn_fridge: fitted fridge power is not positive");
    est.template_day = fridge_wave(est, days.front().start, kMeasurementStep, kMeasurementsPerDay);
    return est;
}

FridgeSplit subtract_fridge(const SampledSeries& day, const FridgeEstimate& est) {
    if (day.step != kMeasurementStep) throw ConfigError("subtract_fridge expects a 900 s series");
    FridgeSplit out;
    out.phase_offset = est.phase_offset;
    const auto n = day.size();
    if (est.cycle_length <= 0.0 || est.nominal_power <= 0.0) {
        out.fridge = SampledSeries(day.start, day.step, std::vector<double>(n, 0.0));
        out.residual = day;
        return out;
    }

    std::vector<std::size_t> night;
    for (std::size_t i = 0; i < n; ++i) {
        const auto minute_of_day = static_cast<int>(((day.time_at(i) / 60) % kMinutesPerDay + kMinutesPerDay) %
                                                    kMinutesPerDay);
        if (is_night_minute(minute_of_day)) night.push_back(i);
    }

    SampledSeries best_wave;
    double best_sse = std::numeric_limits<double>::infinity();
    const int candidates = static_cast<int>(std::ceil(est.cycle_length / 5.0));
    std::vector<double> diff;
    for (int k = 0; k < candidates; ++k) {
        FridgeEstimate shifted = est;
        shifted.phase_offset = positive_mod(est.phase_offset + 5.0 * k, est.cycle_length);
        auto wave = fridge_wave(shifted, day.start, day.step, n);
        double sse = 0.0;
        if (!night.empty()) {
            diff.clear();
            for (auto i : night) diff.push_back(day.values[i] - wave.values[i]);
            sse = centered_ss(diff);
        }
        if (sse < best_sse - 1e-9) {
            best_sse = sse;
            best_wave = std::move(wave);
            out.phase_offset = shifted.phase_offset;
        }
    }

    std::vector<double> fridge(n);
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) {
        residual[i] = std::max(day.values[i] - best_wave.values[i], 0.0);
        fridge[i] = day.values[i] - residual[i];
        out.clipped_wh += (best_wave.values[i] - fridge[i]) * day.step / 3600.0;
    }
    out.fridge = SampledSeries(day.start, day.step, std::move(fridge));
    out.residual = SampledSeries(day.start, day.step, std::move(residual));
    return out;
}

std::vector<Peak> detect_peaks(std::span<const double> values, double delta) {
    if (!(delta > 0.0)) throw ConfigError("peak delta must be positive");
    std::vector<Peak> peaks;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    std::size_t mx_pos = 0;
    bool look_for_max = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (v > mx) {
            mx = v;
            mx_pos = i;
        }
        if (v < mn) mn = v;
        if (look_for_max) {
            if (v < mx - delta) {
                peaks.push_back({mx_pos, mx});
                mn = v;
                look_for_max = false;
            }
        } else if (v > mn + delta) {
            mx = v;
            mx_pos = i;
            look_for_max = true;
        }
    }
    return peaks;
}

bool occupancy(const SampledSeries& residual, double threshold) {
    return !detect_peaks(residual.values, threshold).empty();
}

}  // namespace due
