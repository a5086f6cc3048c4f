#include "due/pretreatment.hpp"
#include "due/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace due;

namespace {

constexpr std::int64_t kMonday = 1428278400;  // 2015-04-06 00:00

FridgeEstimate wave(double power, double on, double cycle, double phase) {
    FridgeEstimate f;
    f.nominal_power = power;
    f.active_duration = on;
    f.cycle_length = cycle;
    f.phase_offset = phase;
    f.day_duty = f.night_duty = on / cycle;
    f.night_mean = power * on / cycle;
    return f;
}

const ApplianceSpec& fridge_spec() { return default_appliance_table()[index_of(ApplianceKind::FridgeFreezer)]; }

}  // namespace

TEST(Standby, MinimumOfTheDay) {
    std::vector<double> v(96, 300.0);
    v[1] = 250.0;
    v[2] = 200.0;
    v[3] = 260.0;
    const auto s = extract_standby(SampledSeries(kMonday, 900, v));
    EXPECT_EQ(s.standby_power, 200.0);
    EXPECT_EQ(*std::min_element(s.residual.values.begin(), s.residual.values.end()), 0.0);
    EXPECT_EQ(s.residual.values[0], 100.0);

    const auto flat = extract_standby(SampledSeries(kMonday, 900, std::vector<double>(96, 80.0)));
    EXPECT_EQ(flat.standby_power, 80.0);
    for (double r : flat.residual.values) EXPECT_EQ(r, 0.0);
}

TEST(Fridge, NominalUpdateFromNightMean) {
    EXPECT_NEAR(update_fridge_nominal(94.0, 0.3, 47.0), 156.6666666667, 1e-9);
    EXPECT_THROW(update_fridge_nominal(94.0, 0.0, 47.0), ConfigError);
    EXPECT_THROW(update_fridge_nominal(0.0, 0.3, 47.0), ConfigError);
}

TEST(Fridge, NightWindow) {
    EXPECT_TRUE(is_night_minute(22 * 60));
    EXPECT_TRUE(is_night_minute(3 * 60));
    EXPECT_FALSE(is_night_minute(6 * 60));
    EXPECT_FALSE(is_night_minute(12 * 60));
}

TEST(Fridge, WaveAveragesToDuty) {
    const auto f = wave(94.0, 25.0, 75.0, 10.0);
    const auto w = fridge_wave(f, kMonday, 60, 1440 * 3);
    double mean = 0.0;
    for (double v : w.values) mean += v;
    mean /= static_cast<double>(w.size());
    // Three days hold 57.6 cycles, so the mean is within one partial cycle.
    EXPECT_NEAR(mean, 94.0 / 3.0, 94.0 * 25.0 / (1440.0 * 3.0) + 1e-9);
    for (double v : w.values) EXPECT_TRUE(v == 0.0 || v == 94.0);
    // 900 s wave is the mean of the 60 s wave.
    const auto coarse = fridge_wave(f, kMonday, 900, 96);
    const auto fine = resample(fridge_wave(f, kMonday, 60, 1440), 900);
    for (std::size_t i = 0; i < 96; ++i) EXPECT_NEAR(coarse.values[i], fine.values[i], 1e-9);
}

TEST(Fridge, LearnsGeneratedSquareWave) {
    for (double phase : {0.0, 20.0, 55.0}) {
        const auto truth = wave(94.0, 25.0, 75.0, phase);
        auto history = resample(fridge_wave(truth, kMonday, 60, 1440 * 7), 900);
        for (auto& v : history.values) v += 30.0;  // standby
        const auto est = learn_fridge(history, fridge_spec());
        EXPECT_NEAR(est.cycle_length, 75.0, 5.0) << "phase " << phase;
        EXPECT_NEAR(est.night_mean, 94.0 / 3.0, 1.0) << "phase " << phase;
        EXPECT_EQ(est.nights_used, 7);
    }
}

TEST(Fridge, RecoversNominalPowerWhenDutyMatchesBeta2) {
    // 25 min on per 85 min cycle is the table's night duty of 0.3 on the 5-min grid.
    const auto truth = wave(94.0, 25.0, 85.0, 40.0);
    const auto history = resample(fridge_wave(truth, kMonday, 60, 1440 * 5), 900);
    const auto est = learn_fridge(history, fridge_spec());
    EXPECT_NEAR(est.cycle_length, 85.0, 5.0);
    EXPECT_NEAR(est.nominal_power, 94.0 * (25.0 / 85.0) / 0.3, 1.0);
    EXPECT_NEAR(est.nominal_power, 94.0, 94.0 * 0.05);
}

TEST(Fridge, FlatZeroNightsAreAnError) {
    const SampledSeries zero(kMonday, 900, std::vector<double>(96 * 3, 0.0));
    EXPECT_THROW(learn_fridge(zero, fridge_spec()), DataError);
    EXPECT_THROW(learn_fridge(zero, default_appliance_table()[index_of(ApplianceKind::TV)]), ConfigError);
    auto no_beta = fridge_spec();
    no_beta.beta2.reset();
    const auto truth = resample(fridge_wave(wave(94.0, 25.0, 75.0, 0.0), kMonday, 60, 1440 * 3), 900);
    EXPECT_THROW(learn_fridge(truth, no_beta), ConfigError);
}

TEST(Fridge, SubtractTemplateAndLinearity) {
    const auto f = wave(94.0, 25.0, 75.0, 35.0);
    const auto day = fridge_wave(f, kMonday + 2 * 86400, 900, 96);
    const auto self = subtract_fridge(day, f);
    for (double r : self.residual.values) EXPECT_LE(std::abs(r), 1e-6);

    auto shifted = day;
    for (auto& v : shifted.values) v += 500.0;
    const auto split = subtract_fridge(shifted, f);
    for (double r : split.residual.values) EXPECT_NEAR(r, 500.0, 1e-6);
    for (std::size_t i = 0; i < 96; ++i) {
        EXPECT_NEAR(split.fridge.values[i] + split.residual.values[i], shifted.values[i], 1e-9);
    }
}

TEST(Fridge, SubtractionNeverExceedsInput) {
    RandomSource rng(5);
    const auto f = wave(120.0, 20.0, 60.0, 0.0);
    std::vector<double> v(96);
    for (auto& x : v) x = rng.uniform() * 150.0;
    const SampledSeries day(kMonday, 900, v);
    const auto split = subtract_fridge(day, f);
    for (std::size_t i = 0; i < 96; ++i) {
        EXPECT_LE(split.fridge.values[i], v[i] + 1e-12);
        EXPECT_GE(split.residual.values[i], 0.0);
        EXPECT_NEAR(split.fridge.values[i] + split.residual.values[i], v[i], 1e-9);
    }
}

TEST(Peaks, ReferenceTraces) {
    const std::vector<double> spike{0, 0, 500, 0, 0};
    EXPECT_EQ(detect_peaks(spike, 100.0), (std::vector<Peak>{{2, 500.0}}));
    std::vector<double> ramp(50);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 20.0 * static_cast<double>(i);
    EXPECT_TRUE(detect_peaks(ramp, 100.0).empty());
    EXPECT_TRUE(detect_peaks(std::vector<double>(20, 300.0), 100.0).empty());
    EXPECT_THROW(detect_peaks(spike, 0.0), ConfigError);
}

TEST(Peaks, ShiftInvariance) {
    RandomSource rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(96);
        for (auto& x : v) x = rng.uniform() < 0.1 ? rng.uniform() * 2000.0 : rng.uniform() * 50.0;
        auto up = v;
        for (auto& x : up) x += 1234.0;
        const auto a = detect_peaks(v, 100.0);
        const auto b = detect_peaks(up, 100.0);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].index, b[i].index);
    }
}

TEST(Occupancy, Examples) {
    EXPECT_FALSE(occupancy(SampledSeries(kMonday, 900, std::vector<double>(96, 0.0)), 100.0));
    std::vector<double> cooking(96, 0.0);
    cooking[70] = 1500.0;
    EXPECT_TRUE(occupancy(SampledSeries(kMonday, 900, cooking), 100.0));
    EXPECT_FALSE(occupancy(SampledSeries(kMonday, 900, cooking), 2000.0));
}
