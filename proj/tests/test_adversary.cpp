#include "promptsched/adversary.hpp"
#include "promptsched/dynamic_menu.hpp"
#include "promptsched/slot_pricing.hpp"
#include "promptsched/static_menu.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace promptsched;

TEST(Adversary, LengthsAgainstDynamic) {
    DynamicMenu dm(1, false);
    const Time P = Time{1} << 24;
    auto r = gen_lengths_lb(dm, 1, P);
    ASSERT_TRUE(r.stop.has_value());
    EXPECT_LE(*r.stop, 16u);
    BigInt n = r.n_stop();
    EXPECT_LE(r.cost_opt, 4 * BigInt(P) * n);
    EXPECT_GT(r.cost_alg, 4 * BigInt(P) * n);
    EXPECT_EQ(r.cost_opt, oracle::smith_cost(r.stream));
    // single machine, equal weights: the three terms add up to the optimum
    EXPECT_EQ(r.term_i + r.term_ii + r.term_iii, r.cost_opt);
    EXPECT_LE(r.term_i, 2 * BigInt(P) * n);
}

TEST(Adversary, LengthsAgainstStatic) {
    StaticMenu sm(1, false);
    auto r = gen_lengths_lb(sm, 1, Time{1} << 16);
    ASSERT_TRUE(r.stop.has_value());
    EXPECT_GT(r.cost_alg, 4 * BigInt(r.P) * r.n_stop());
    EXPECT_EQ(r.term_i + r.term_ii + r.term_iii, r.cost_opt);
}

TEST(Adversary, LengthsValidatesArguments) {
    DynamicMenu dm(1);
    EXPECT_THROW(gen_lengths_lb(dm, 1, 1000), std::invalid_argument);
    EXPECT_THROW(gen_lengths_lb(dm, 1, 1 << 10), std::invalid_argument);
    EXPECT_THROW(gen_lengths_lb(dm, 0, 1 << 20), std::invalid_argument);
}

TEST(Adversary, WeightsAgainstPricing) {
    SlotPricing sp(1, false);
    auto r = gen_weights_lb(sp, 8);
    ASSERT_TRUE(r.stop.has_value());
    EXPECT_GE(*r.stop, 1u);
    EXPECT_LE(*r.stop, 64u);
    EXPECT_EQ(r.cost_opt, r.opt_formula());
    EXPECT_EQ(r.cost_opt, oracle::smith_cost(r.stream));
    EXPECT_LT(r.cost_opt, big_pow2(8 + *r.stop + 2));
    EXPECT_GT(Rational(r.cost_alg, r.cost_opt), 8);
}

TEST(Adversary, WeightsEveryJobTakesEarliestFreeSlot) {
    SlotPricing sp(1, false);
    auto r = gen_weights_lb(sp, 6);
    for (std::size_t i = 0; i < r.completion.size(); ++i) EXPECT_EQ(r.completion[i], static_cast<Time>(i + 1));
}

TEST(Adversary, AscendingWarmup) {
    for (unsigned d : {6u, 8u, 10u}) {
        std::uint64_t n = std::uint64_t{1} << (d / 2);
        auto w = gen_warmup(WarmupVariant::Ascending, d, n);
        Schedule s;
        for (const Job& j : w.stream.jobs) s.assignments.push_back(w.scheduler.submit(j));
        ASSERT_TRUE(validate(s, w.stream).empty());
        BigInt alg = weighted_completion_sum(s, w.stream);
        BigInt opt = weighted_completion_sum(spt_offline(w.stream, 1), w.stream);
        EXPECT_GE(alg, BigInt(n) << d) << "d=" << d;
        EXPECT_LE(opt, BigInt(n * n) + BigInt((d + 1) * n) + big_pow2(d + 2));
    }
}

TEST(Adversary, AscendingWarmupRatioGrows) {
    Rational prev = 0;
    for (unsigned d : {4u, 6u, 8u, 10u, 12u}) {
        auto w = gen_warmup(WarmupVariant::Ascending, d, std::uint64_t{1} << (d / 2));
        Schedule s;
        for (const Job& j : w.stream.jobs) s.assignments.push_back(w.scheduler.submit(j));
        Rational ratio(weighted_completion_sum(s, w.stream), weighted_completion_sum(spt_offline(w.stream, 1), w.stream));
        EXPECT_GT(ratio, prev) << "d=" << d;
        prev = ratio;
    }
}

TEST(Adversary, DescendingWarmup) {
    for (unsigned d : {4u, 6u, 8u}) {
        auto w = gen_warmup(WarmupVariant::Descending, d, 0);
        Schedule s;
        for (const Job& j : w.stream.jobs) s.assignments.push_back(w.scheduler.submit(j));
        ASSERT_TRUE(validate(s, w.stream).empty());
        EXPECT_GE(weighted_completion_sum(s, w.stream), big_pow2(d + d / 2)) << "d=" << d;
    }
}

TEST(Adversary, StaticLowerBoundInstanceShape) {
    auto s = gen_static_lb(6, 4);
    std::map<Time, std::size_t> count;
    for (const Job& j : s.jobs) ++count[j.processing];
    EXPECT_EQ(count[16], 8u);
    EXPECT_EQ(count[8], 8u);
    EXPECT_EQ(count[4], 16u);
    EXPECT_EQ(count[2], 32u);
    EXPECT_EQ(count[1], 64u + 64u);
    EXPECT_EQ(s.jobs.front().processing, 16);
    EXPECT_EQ(s.jobs.back().processing, 1);
    EXPECT_THROW(gen_static_lb(4, 4), std::invalid_argument);
}

TEST(Adversary, StaticLowerBoundVolume) {
    const unsigned n = 10, k = 4;
    auto s = gen_static_lb(n, k);
    Time volume = 0;
    for (std::size_t i = 0; i + (std::size_t{1} << n) < s.jobs.size(); ++i) volume += s.jobs[i].processing;
    // every class below 2^k fills its share 2^n; the 2^k class brings (n-k) 2^n
    EXPECT_EQ(volume, static_cast<Time>(n) << n);
}
