#include "due/co_baseline.hpp"
#include "due/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace due;

namespace {

PowerBasis two_bases() {
    PowerBasis b;
    b.levels[Category::Cooking] = {0.0, 100.0};
    b.levels[Category::Light] = {0.0, 60.0};
    return b;
}

// Independent oracle: enumerate every index vector, keep the first one that
// is strictly better by (error, non-zero count, lexicographic order).
std::vector<std::size_t> brute_force(double aggregate, const PowerBasis& basis) {
    std::vector<const std::vector<double>*> lists;
    for (const auto& [c, l] : basis.levels) lists.push_back(&l);
    std::vector<std::vector<std::size_t>> all{{}};
    for (const auto* l : lists) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& prefix : all) {
            for (std::size_t i = 0; i < l->size(); ++i) {
                auto v = prefix;
                v.push_back(i);
                next.push_back(v);
            }
        }
        all = std::move(next);
    }
    auto key = [&](const std::vector<std::size_t>& v) {
        double sum = 0.0;
        int nonzero = 0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            sum += (*lists[k])[v[k]];
            nonzero += v[k] != 0;
        }
        return std::make_tuple(std::abs(aggregate - sum), nonzero, v);
    };
    auto best = all.front();
    for (const auto& v : all) {
        if (key(v) < key(best)) best = v;
    }
    return best;
}

}  // namespace

TEST(Co, ReferenceAssignments) {
    const auto b = two_bases();
    EXPECT_EQ(co_assign(160.0, b), (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(co_assign(0.0, b), (std::vector<std::size_t>{0, 0}));
    EXPECT_EQ(co_assign(90.0, b), (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(b.combinations(), 4u);
}

TEST(Co, TiesPreferFewerActiveCategories) {
    PowerBasis b;
    b.levels[Category::Cooking] = {0.0, 50.0};
    b.levels[Category::Light] = {0.0, 20.0, 30.0};
    // 25 is equally far from Light 20 and Light 30: lower index wins.
    EXPECT_EQ(co_assign(50.0, b), (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(co_assign(25.0, b), (std::vector<std::size_t>{0, 1}));
    PowerBasis same;
    same.levels[Category::Cooking] = {0.0, 40.0};
    same.levels[Category::Light] = {0.0, 40.0};
    EXPECT_EQ(co_assign(40.0, same), (std::vector<std::size_t>{0, 1}));
}

TEST(Co, MatchesBruteForce) {
    RandomSource rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        PowerBasis b;
        const auto cats = 1 + rng.uniform_index(4);
        for (std::size_t c = 0; c < cats; ++c) {
            std::vector<double> l{0.0};
            const auto extra = rng.uniform_index(3);
            for (std::size_t k = 0; k < extra; ++k) l.push_back(std::round(rng.uniform() * 20.0) * 10.0 + 10.0);
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
            b.levels[kAllCategories[c * 2]] = l;
        }
        for (int t = 0; t < 96; ++t) {
            const double agg = std::round(rng.uniform() * 100.0) * 10.0;
            ASSERT_EQ(co_assign(agg, b), brute_force(agg, b)) << "trial " << trial << " aggregate " << agg;
        }
    }
}

TEST(Co, BeamAgreesOnSmallProblems) {
    const auto b = two_bases();
    CoOptions beam;
    beam.exhaustive_limit = 1;
    for (double agg : {0.0, 30.0, 90.0, 160.0, 500.0}) EXPECT_EQ(co_assign(agg, b, nullptr, beam), co_assign(agg, b));
}

TEST(Co, ContinuityPenaltyKeepsPreviousState) {
    PowerBasis b;
    b.levels[Category::Cooking] = {0.0, 100.0};
    const std::vector<std::size_t> prev{1};
    CoOptions opt;
    opt.continuity_penalty = 20.0;
    EXPECT_EQ(co_assign(35.0, b, &prev, opt), (std::vector<std::size_t>{0}));
    EXPECT_EQ(co_assign(60.0, b, &prev, opt), (std::vector<std::size_t>{1}));
    EXPECT_EQ(co_assign(85.0, b, &prev, opt), (std::vector<std::size_t>{1}));
}

TEST(Co, TrainingLevels) {
    const SampledSeries two(0, 900, {0, 100, 100, 0, 100, 0});
    EXPECT_EQ(train_co({{Category::Cooking, two}}, 3).levels.at(Category::Cooking), (std::vector<double>{0.0, 100.0}));

    std::vector<double> fridge;
    RandomSource rng(8);
    for (int i = 0; i < 900; ++i) {
        const double mode = i % 3 == 0 ? 0.0 : (i % 3 == 1 ? 66.0 : 94.0);
        fridge.push_back(mode == 0.0 ? 0.0 : mode + (rng.uniform() - 0.5) * 6.0);
    }
    const auto levels = quantise_levels(fridge, 3);
    ASSERT_EQ(levels.size(), 3u);
    EXPECT_EQ(levels[0], 0.0);
    EXPECT_NEAR(levels[1], 66.0, 5.0);
    EXPECT_NEAR(levels[2], 94.0, 5.0);

    const SampledSeries zero(0, 900, std::vector<double>(10, 0.0));
    EXPECT_EQ(train_co({{Category::Light, zero}}).levels.at(Category::Light), (std::vector<double>{0.0}));
    EXPECT_THROW(train_co({}), ConfigError);
    EXPECT_THROW(train_co({{Category::Light, two}}, 0), ConfigError);
    EXPECT_THROW(train_co({{Category::Light, SampledSeries(0, 900, {})}}), DataError);
}

TEST(Co, DisaggregationReconstructsExactSums) {
    const auto b = two_bases();
    const SampledSeries agg(0, 900, {0, 60, 100, 160, 0});
    const auto out = disaggregate_co(agg, b);
    EXPECT_EQ(out.at(Category::Cooking).values, (std::vector<double>{0, 0, 100, 100, 0}));
    EXPECT_EQ(out.at(Category::Light).values, (std::vector<double>{0, 60, 0, 60, 0}));
}

TEST(Co, BasisRoundTrip) {
    PowerBasis b = two_bases();
    b.levels[Category::Fridge] = {0.0, 66.25, 94.125};
    std::stringstream buf;
    write_basis(buf, b);
    EXPECT_EQ(read_basis(buf), b);
    std::istringstream bad("due-co-basis 1\nLight 20 60\n");
    EXPECT_THROW(read_basis(bad), DataError);
}
