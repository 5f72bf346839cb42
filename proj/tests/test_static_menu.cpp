#include "promptsched/harness.hpp"
#include "promptsched/static_menu.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace promptsched;

TEST(StaticMenu, LoneJobOfLengthFour) {
    auto run = run_static(JobStream::from_jobs({{1, 0, 1, 4}}), 1, false);
    EXPECT_EQ(run.schedule.assignments[0].interval, (Interval{8, 12}));
}

TEST(StaticMenu, MatchesLinearFirstFit) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        RandomStreamParams prm;
        prm.n = 120;
        prm.p_exp = 5;
        prm.horizon = 60;
        auto s = random_stream(prm, seed);
        int m = 1 + static_cast<int>(seed % 3);
        auto run = run_static(s, m, false);
        auto ref = oracle::static_first_fit(s, m);
        for (std::size_t i = 0; i < s.jobs.size(); ++i) {
            ASSERT_EQ(run.schedule.assignments[i].interval, ref[i].first) << "seed " << seed << " job " << i + 1;
            ASSERT_EQ(run.schedule.assignments[i].machine, ref[i].second);
        }
    }
}

TEST(StaticMenu, FeedbackRemainderIsReused) {
    StaticMenu sm(1, true);
    EXPECT_EQ(sm.submit({1, 2, 1, 1}).interval, (Interval{2, 4}));
    EXPECT_EQ(sm.remainder_count(), 1u);
    Assignment b = sm.submit({2, 3, 1, 1});
    EXPECT_EQ(b.interval, (Interval{3, 4}));
    EXPECT_EQ(sm.remainder_count(), 0u);
}

TEST(StaticMenu, NoFeedbackWastesTail) {
    StaticMenu sm(1, false);
    sm.submit({1, 2, 1, 1});
    EXPECT_EQ(sm.submit({2, 3, 1, 1}).interval, (Interval{4, 5}));
}

TEST(StaticMenu, AscendingWarmupOptimumBound) {
    for (unsigned d : {4u, 6u, 8u}) {
        std::uint64_t n = std::uint64_t{1} << (d / 2);
        auto w = gen_warmup(WarmupVariant::Ascending, d, n);
        BigInt opt = weighted_completion_sum(spt_offline(w.stream, 1), w.stream);
        BigInt bound = BigInt(n * n) + BigInt((d + 1) * n) + big_pow2(d + 2);
        EXPECT_LE(opt, bound) << "d=" << d;
        EXPECT_EQ(opt, oracle::smith_cost(w.stream));
    }
}

TEST(StaticMenu, StaticLowerBoundSixteen) {
    auto r = static_lb_ratio(16, 8);
    BigInt scale = big_pow2(32);
    EXPECT_GT(r.cost_alg, 16 * scale);
    EXPECT_LE(r.cost_opt, 8 * scale);
    EXPECT_GE(r.ratio, 2);
    EXPECT_EQ(r.cost_opt, oracle::smith_cost(gen_static_lb(16, 8)));
}

TEST(StaticMenu, StaticLowerBoundTwelve) {
    auto r = static_lb_ratio(12, 7);  // k = ceil(2 log2 12)
    EXPECT_GE(r.ratio, Rational(12, 8));
    BigInt scale = big_pow2(24);
    EXPECT_GT(r.cost_alg, 12 * scale);
}

TEST(StaticMenu, StaticLowerBoundOptFormula) {
    for (auto [n, k] : {std::pair{8u, 3u}, std::pair{10u, 4u}, std::pair{16u, 8u}}) {
        auto s = gen_static_lb(n, k);
        BigInt bound = big_pow2(2 * n) * 7 + big_pow2(2 * n) * n * (n - k) / big_pow2(k);
        EXPECT_LE(weighted_completion_sum(spt_offline(s, 1), s), bound) << "n=" << n << " k=" << k;
    }
}

TEST(StaticMenu, StaticLowerBoundUnitJobsStartLate) {
    const unsigned n = 10, k = 4;
    auto s = gen_static_lb(n, k);
    auto run = run_static(s, 1, true);
    ASSERT_TRUE(validate(run.schedule, s).empty());
    Time earliest = std::numeric_limits<Time>::max();
    std::size_t units = std::size_t{1} << n;
    for (std::size_t i = s.jobs.size() - units; i < s.jobs.size(); ++i)
        earliest = std::min(earliest, run.schedule.assignments[i].start);
    // the 2^k block leaves one interval of the order-n prefix unused, so the floor is n 2^n
    EXPECT_GE(earliest, static_cast<Time>(n) << n);
}

TEST(StaticMenu, NMax) {
    auto s = JobStream::from_jobs({{1, 0, 1, 1}, {2, 0, 1, 1}, {3, 0, 1, 3}, {4, 0, 1, 4}, {5, 0, 1, 4}, {6, 0, 1, 2}});
    EXPECT_EQ(n_max(s), 3u);  // 2 < p <= 4 holds three jobs
}

TEST(StaticMenu, RejectsUnnormalized) {
    StaticMenu sm(1, false);
    EXPECT_THROW(sm.submit({1, 0, 1, 3}), std::invalid_argument);
}
