#include "due/tou_model.hpp"

#include "../support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace due;
using enum ActivityState;

namespace {

const Date kMonday{std::chrono::year{2016}, std::chrono::month{3}, std::chrono::day{7}};

std::vector<ActivityEvent> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_diary(in);
}

ActivityEvent ev(std::string person, ActivityState a, int start, int end, Date d = kMonday,
                 Employment e = Employment::FullTime, AgeGroup g = AgeGroup::AdultActive) {
    return {std::move(person), e, g, d, a, start, end};
}

double row_sum(const ProbabilityVector& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

}  // namespace

TEST(Diary, ParsesEpisodesOntoSlots) {
    const auto events = parse(
        "person,employment,age_group,date,activity,start,end\n"
        "a,full-time,adult-active,2016-03-07,Sleeping,00:00,07:00\n"
        "a,full-time,adult-active,2016-03-07,Working,07:00,17:00\n"
        "a,full-time,adult-active,2016-03-07,WatchingTV,17:00,24:00\n");
    ASSERT_EQ(events.size(), 3u);
    EXPECT_EQ(events[0].start_slot, 0);
    EXPECT_EQ(events[0].end_slot, 84);
    EXPECT_EQ(events[1].start_slot, 84);
    EXPECT_EQ(events[1].end_slot, 204);
    EXPECT_EQ(events[2].start_slot, 204);
    EXPECT_EQ(events[2].end_slot, 288);
    EXPECT_EQ(events[1].activity, Working);
}

TEST(Diary, GapIsRejectedNamingPersonAndDay) {
    try {
        parse("person,employment,age_group,date,activity,start,end\n"
              "bob,full-time,adult-active,2016-03-07,Sleeping,00:00,07:00\n"
              "bob,full-time,adult-active,2016-03-07,Working,07:05,24:00\n");
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("bob"), std::string::npos);
        EXPECT_NE(msg.find("2016-03-07"), std::string::npos);
    }
}

TEST(Diary, OverlapAndUnknownActivityAreRejected) {
    EXPECT_THROW(parse("person,employment,age_group,date,activity,start,end\n"
                       "a,full-time,adult-active,2016-03-07,Sleeping,00:00,08:00\n"
                       "a,full-time,adult-active,2016-03-07,Working,07:00,24:00\n"),
                 DataError);
    EXPECT_THROW(parse("person,employment,age_group,date,activity,start,end\n"
                       "a,full-time,adult-active,2016-03-07,Napping,00:00,24:00\n"),
                 DataError);
    EXPECT_THROW(parse("person,employment,age_group,date,activity,start,end\n"
                       "a,full-time,adult-active,2016-03-07,Sleeping,00:00,07:03\n"
                       "a,full-time,adult-active,2016-03-07,Working,07:03,24:00\n"),
                 DataError);
}

TEST(Diary, EmptyFileGivesNoEvents) {
    EXPECT_TRUE(parse("").empty());
    EXPECT_TRUE(parse("person,employment,age_group,date,activity,start,end\n").empty());
}

TEST(Diary, WriteParseRoundTrip) {
    RandomSource rng(11);
    const auto events = due::testing::random_diary(rng, 40);
    std::ostringstream out;
    write_diary(out, events);
    EXPECT_EQ(parse(out.str()), events);
}

TEST(Initial, CountsMidnightActivities) {
    const std::vector<ActivityEvent> events{ev("a", Sleeping, 0, 288), ev("b", Sleeping, 0, 288),
                                            ev("c", WatchingTV, 0, 100), ev("c", Sleeping, 100, 288)};
    const auto pi = estimate_initial(events);
    const Stratum s{Employment::FullTime, AgeGroup::AdultActive, DayType::Weekday};
    const auto p = pi.probabilities(s);
    ASSERT_TRUE(p.has_value());
    EXPECT_DOUBLE_EQ((*p)[index_of(Sleeping)], 2.0 / 3.0);
    EXPECT_DOUBLE_EQ((*p)[index_of(WatchingTV)], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(row_sum(*p), 1.0);
    EXPECT_EQ((*p)[index_of(Cooking)], 0.0);
}

TEST(Initial, SingleObservationIsIndicator) {
    const std::vector<ActivityEvent> events{ev("a", Sleeping, 0, 288)};
    const auto p = estimate_initial(events).probabilities({Employment::FullTime, AgeGroup::AdultActive, DayType::Weekday});
    ASSERT_TRUE(p);
    for (std::size_t i = 0; i < kActivityCount; ++i) EXPECT_EQ((*p)[i], i == index_of(Sleeping) ? 1.0 : 0.0);
}

TEST(Initial, UnobservedStratumIsFlaggedAndResolvedByFallback) {
    const std::vector<ActivityEvent> events{ev("a", Sleeping, 0, 288)};
    const auto pi = estimate_initial(events);
    const Stratum sunday{Employment::PartTime, AgeGroup::Teenager, DayType::Sunday};
    EXPECT_FALSE(pi.observed(sunday));
    EXPECT_FALSE(pi.probabilities(sunday).has_value());
    const auto d = pi.resolve(sunday);
    EXPECT_EQ(d.level, Fallback::Uniform);
    for (double v : d.p) EXPECT_DOUBLE_EQ(v, 1.0 / kActivityCount);

    // Observed on a weekday only: Sunday pools the day types.
    const Stratum weekday_sunday{Employment::FullTime, AgeGroup::AdultActive, DayType::Sunday};
    const auto pooled = pi.resolve(weekday_sunday);
    EXPECT_EQ(pooled.level, Fallback::PooledDayTypes);
    EXPECT_EQ(pooled.p[index_of(Sleeping)], 1.0);
}

TEST(Transitions, RowFromObservedDepartures) {
    std::vector<ActivityEvent> events;
    for (auto [id, next] : {std::pair{"a", Working}, std::pair{"b", Working}, std::pair{"c", Eating}}) {
        events.push_back(ev(id, Sleeping, 0, 84));
        events.push_back(ev(id, next, 84, 288));
    }
    const auto trans = estimate_transitions(events);
    const Stratum s{Employment::FullTime, AgeGroup::AdultActive, DayType::Weekday};
    const auto row = trans.row(s, Sleeping, 84);
    ASSERT_TRUE(row);
    EXPECT_DOUBLE_EQ((*row)[index_of(Working)], 2.0 / 3.0);
    EXPECT_DOUBLE_EQ((*row)[index_of(Eating)], 1.0 / 3.0);
    EXPECT_FALSE(trans.row(s, Sleeping, 85).has_value());
    EXPECT_FALSE(trans.row(s, Working, 84).has_value());
}

TEST(Transitions, SingleTransitionIsIndicator) {
    const std::vector<ActivityEvent> events{ev("a", Cooking, 0, 10), ev("a", Eating, 10, 288)};
    const auto row = estimate_transitions(events).row({Employment::FullTime, AgeGroup::AdultActive, DayType::Weekday},
                                                      Cooking, 10);
    ASSERT_TRUE(row);
    EXPECT_EQ((*row)[index_of(Eating)], 1.0);
    EXPECT_DOUBLE_EQ(row_sum(*row), 1.0);
}

TEST(Transitions, DeriveMatchesEventBoundaries) {
    const std::vector<ActivityEvent> events{ev("a", Sleeping, 0, 84), ev("a", Working, 84, 204),
                                            ev("a", WatchingTV, 204, 288)};
    const auto t = derive_transitions(events);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t[0].slot, 84);
    EXPECT_EQ(t[0].from, Sleeping);
    EXPECT_EQ(t[0].to, Working);
    EXPECT_EQ(t[1].slot, 204);
}

TEST(Durations, PopulationStatistics) {
    const std::vector<ActivityEvent> events{ev("a", Cooking, 0, 6), ev("a", Sleeping, 6, 288),
                                            ev("b", Cooking, 0, 12), ev("b", Sleeping, 12, 288),
                                            ev("c", Cooking, 0, 18), ev("c", Sleeping, 18, 288)};
    const auto d = estimate_durations(events);
    const Stratum s{Employment::FullTime, AgeGroup::AdultActive, DayType::Weekday};
    const auto st = d.stats(s, Cooking);
    EXPECT_EQ(st.count, 3u);
    EXPECT_DOUBLE_EQ(st.mean, 60.0);
    EXPECT_NEAR(st.stddev, std::sqrt(600.0), 1e-12);
    EXPECT_NEAR(st.stddev, 24.4949, 1e-4);
}

TEST(Durations, SingleAndEmpty) {
    const std::vector<ActivityEvent> events{ev("a", Cooking, 0, 9), ev("a", Sleeping, 9, 288)};
    const auto d = estimate_durations(events);
    const Stratum s{Employment::FullTime, AgeGroup::AdultActive, DayType::Weekday};
    EXPECT_DOUBLE_EQ(d.stats(s, Cooking).mean, 45.0);
    EXPECT_DOUBLE_EQ(d.stats(s, Cooking).stddev, 0.0);
    EXPECT_EQ(d.stats(s, Laundry).count, 0u);
    const auto [fallback, level] = d.resolve({Employment::Retired, AgeGroup::SeniorInactive, DayType::Sunday}, Laundry);
    EXPECT_EQ(level, Fallback::Uniform);
    EXPECT_GT(fallback.mean, 0.0);
}

TEST(Estimators, MatchCountingOracleOnRandomDiaries) {
    RandomSource root(2024);
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        auto rng = root.derive({trial});
        const auto events = due::testing::random_diary(rng, 50);
        const auto pi = estimate_initial(events);
        for (const auto& [stratum, counts] : due::testing::oracle_initial(events)) {
            std::uint64_t total = 0;
            for (auto [a, n] : counts) total += n;
            const auto s = Stratum::from_index(stratum);
            ASSERT_EQ(pi.total(s), total);
            for (std::size_t a = 0; a < kActivityCount; ++a) {
                const auto it = counts.find(a);
                const std::uint64_t n = it == counts.end() ? 0 : it->second;
                EXPECT_TRUE(due::testing::same_rational({pi.counts(s)[a], pi.total(s)}, {n, total}));
                EXPECT_EQ((*pi.probabilities(s))[a], static_cast<double>(n) / static_cast<double>(total));
            }
        }
        const auto trans = estimate_transitions(events);
        const auto oracle = due::testing::oracle_transitions(events);
        EXPECT_EQ(trans.observed_rows(), oracle.size());
        for (const auto& [key, counts] : oracle) {
            const auto& [stratum, slot, from] = key;
            const auto* row = trans.counts(Stratum::from_index(stratum), from_index<ActivityState>(from), slot);
            ASSERT_NE(row, nullptr);
            std::uint64_t total = 0;
            for (auto [a, n] : counts) total += n;
            for (std::size_t a = 0; a < kActivityCount; ++a) {
                const auto it = counts.find(a);
                EXPECT_EQ((*row)[a], it == counts.end() ? 0u : it->second);
            }
        }
    }
}

TEST(Estimators, PermutationInvariant) {
    RandomSource rng(5);
    auto events = due::testing::random_diary(rng, 200);
    const auto model = ActivityModel::estimate(events);
    std::reverse(events.begin(), events.end());
    rng.shuffle(std::span<ActivityEvent>(events));
    EXPECT_EQ(ActivityModel::estimate(events), model);
}

TEST(Estimators, RowsAreStochastic) {
    RandomSource root(99);
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        auto rng = root.derive({trial});
        const auto events = due::testing::random_diary(rng, 1 + rng.uniform_index(120));
        const auto model = ActivityModel::estimate(events);
        for (std::size_t i = 0; i < kStratumCount; ++i) {
            const auto s = Stratum::from_index(i);
            if (const auto p = model.initial().probabilities(s)) {
                EXPECT_NEAR(row_sum(*p), 1.0, 1e-9);
                for (double v : *p) EXPECT_TRUE(v >= 0.0 && v <= 1.0);
            }
        }
        for (const auto& [key, counts] : model.transitions().rows()) {
            const auto slot = static_cast<int>((key / kActivityCount) % kSlotsPerDay);
            const auto s = Stratum::from_index(key / (kActivityCount * kSlotsPerDay));
            const auto row = model.transitions().row(s, from_index<ActivityState>(key % kActivityCount), slot);
            ASSERT_TRUE(row);
            EXPECT_NEAR(row_sum(*row), 1.0, 1e-9);
        }
    }
}

TEST(Model, SaveLoadRoundTripIsExact) {
    RandomSource rng(8);
    const auto model = ActivityModel::estimate(due::testing::random_diary(rng, 300));
    std::stringstream buf;
    model.save(buf);
    const auto back = ActivityModel::load(buf);
    EXPECT_EQ(back, model);
}

TEST(Model, LoadRejectsGarbage) {
    std::istringstream in("not a model\n");
    EXPECT_THROW(ActivityModel::load(in), DataError);
}

TEST(SyntheticDiary, DeterministicUnderSeed) {
    const auto config = full_synthetic_config(1, 3, 42);
    const auto a = generate_synthetic_diary(config);
    const auto b = generate_synthetic_diary(config);
    std::ostringstream sa, sb;
    write_diary(sa, a);
    write_diary(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_NO_THROW(check_tiling(a));
    auto other = config;
    other.seed = 43;
    EXPECT_NE(generate_synthetic_diary(other), a);
}

TEST(SyntheticDiary, RecoversMidnightDistribution) {
    SyntheticDiaryConfig c;
    c.strata = {{Employment::FullTime, AgeGroup::AdultActive, 100}};
    c.days = 1;  // 2015-04-06 is a Monday
    const auto pi = estimate_initial(generate_synthetic_diary(c));
    const Stratum s{Employment::FullTime, AgeGroup::AdultActive, DayType::Weekday};
    const auto p = pi.probabilities(s);
    ASSERT_TRUE(p);
    const auto expected = synthetic_midnight_distribution(s.employment, s.age_group, s.day_type);
    for (std::size_t i = 0; i < kActivityCount; ++i) EXPECT_NEAR((*p)[i], expected[i], 0.05) << to_string(from_index<ActivityState>(i));
}

TEST(SyntheticDiary, EmptyConfigAndInvalidStratum) {
    SyntheticDiaryConfig c;
    EXPECT_TRUE(generate_synthetic_diary(c).empty());
    c.strata = {{Employment::FullTime, AgeGroup::AdultActive, 0}};
    EXPECT_THROW(generate_synthetic_diary(c), ConfigError);
}

TEST(SyntheticDiary, EmployedAdultsWorkOnWeekdays) {
    SyntheticDiaryConfig c;
    c.strata = {{Employment::FullTime, AgeGroup::AdultActive, 20}};
    c.days = 5;
    int working_at_eleven = 0, sleeping_at_three = 0, days = 0;
    const auto events = generate_synthetic_diary(c);
    for (const auto& e : events) {
        if (e.start_slot == 0) ++days;
        if (e.activity == Working && e.start_slot <= 132 && e.end_slot > 132) ++working_at_eleven;
        if (e.activity == Sleeping && e.start_slot <= 36 && e.end_slot > 36) ++sleeping_at_three;
    }
    EXPECT_EQ(days, 100);
    EXPECT_GT(working_at_eleven, 80);
    EXPECT_GT(sleeping_at_three, 95);
}
