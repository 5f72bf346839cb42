#pragma once

// Hard instances: adaptive length and weight adversaries that only observe the
// assignments a prompt mechanism hands out, the warmup partitions, and the
// static-partition lower-bound instance.

#include "promptsched/baselines.hpp"
#include "promptsched/core_model.hpp"

#include <concepts>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace promptsched {

template <class M>
concept PromptMechanism = requires(M m, const Job& j) {
    { m.submit(j) } -> std::same_as<Assignment>;
    { m.machines() } -> std::convertible_to<int>;
};

struct LengthsRun {
    unsigned c = 1;
    Time P = 0;
    JobStream stream;
    std::vector<std::uint64_t> late;  // per iteration: jobs of that iteration completing after 8cP
    std::optional<unsigned> stop;
    BigInt cost_alg = 0;
    BigInt cost_opt = 0;
    BigInt term_i = 0, term_ii = 0, term_iii = 0;  // the three parts of the single-machine OPT cost

    std::uint64_t n_stop() const { return stop ? std::uint64_t{1} << *stop : 0; }
};

/// Iteration i releases 2^i jobs of size P/2^i at time 0, stopping once half of
/// them complete after 8cP.
template <PromptMechanism M>
LengthsRun gen_lengths_lb(M& mech, unsigned c, Time P) {
    if (c < 1 || 16 * c >= 63) throw std::invalid_argument("gen_lengths_lb: c out of range");
    if (P < 1 || !is_pow2(static_cast<std::uint64_t>(P)) || floor_log2(static_cast<std::uint64_t>(P)) < 16 * c)
        throw std::invalid_argument("gen_lengths_lb: P must be a power of 2 with P >= 2^{16c}");
    LengthsRun run;
    run.c = c;
    run.P = P;
    Time cutoff = 8 * static_cast<Time>(c) * P;
    std::int64_t index = 0;
    std::vector<Job> jobs;
    for (unsigned i = 0; i <= 16 * c; ++i) {
        std::uint64_t n_i = std::uint64_t{1} << i;
        Time p_i = P >> i;
        std::uint64_t late = 0;
        for (std::uint64_t r = 0; r < n_i; ++r) {
            Job j{++index, 0, 1, p_i};
            Assignment a = mech.submit(j);
            run.cost_alg += a.completion;
            if (a.completion > cutoff) ++late;
            jobs.push_back(j);
        }
        run.late.push_back(late);
        if (2 * late >= n_i) {
            run.stop = i;
            break;
        }
    }
    run.stream = JobStream::from_jobs(std::move(jobs));
    run.cost_opt = weighted_completion_sum(spt_offline(run.stream, mech.machines()), run.stream);
    if (run.stop) {
        unsigned j = *run.stop;
        auto n = [](unsigned i) { return BigInt(1) << i; };
        auto p = [&](unsigned i) { return BigInt(P >> i); };
        auto tri = [](const BigInt& x) { return x * (x + 1) / 2; };
        run.term_i = p(j) * tri(n(j));
        for (unsigned i = 0; i < j; ++i) {
            run.term_ii += p(i) * tri(n(i));
            BigInt later = 0;
            for (unsigned l = i + 1; l <= j; ++l) later += n(l) * p(l);
            run.term_iii += later * n(i);
        }
    }
    return run;
}

struct WeightsRun {
    unsigned k = 1;
    JobStream stream;
    std::vector<Time> completion;
    std::optional<unsigned> stop;  // j*
    BigInt cost_alg = 0;
    BigInt cost_opt = 0;

    /// sum_{i=0}^{j*-1} (i+1) 2^{k+j*-i}
    BigInt opt_formula() const {
        BigInt s = 0;
        if (!stop) return s;
        for (unsigned i = 0; i < *stop; ++i) s += BigInt(i + 1) * big_pow2(k + *stop - i);
        return s;
    }
};

/// Job j (weight 2^{k+j}, unit length) arrives at time 0; stop once c_j > 4k.
template <PromptMechanism M>
WeightsRun gen_weights_lb(M& mech, unsigned k) {
    if (k < 1) throw std::invalid_argument("gen_weights_lb: k must be >= 1");
    WeightsRun run;
    run.k = k;
    std::vector<Job> jobs;
    for (unsigned j = 1; j <= 8 * k; ++j) {
        Job job{j, 0, big_pow2(k + j), 1};
        Assignment a = mech.submit(job);
        jobs.push_back(job);
        run.completion.push_back(a.completion);
        run.cost_alg += job.weight * a.completion;
        if (a.completion > static_cast<Time>(4 * k)) {
            run.stop = j;
            break;
        }
    }
    run.stream = JobStream::from_jobs(std::move(jobs));
    run.cost_opt = weighted_completion_sum(spt_offline(run.stream, mech.machines()), run.stream);
    return run;
}

enum class WarmupVariant { Ascending, Descending };

/// First-fit over a fixed, periodically repeated partition of the timeline.
class PeriodicFirstFit {
public:
    PeriodicFirstFit(std::vector<Time> pattern, int machines) : pattern_(std::move(pattern)), m_(machines) {
        if (pattern_.empty() || machines < 1) throw std::invalid_argument("PeriodicFirstFit: empty pattern");
        for (Time l : pattern_) {
            offsets_.push_back(period_);
            period_ += l;
        }
    }

    int machines() const { return m_; }
    const std::vector<Time>& pattern() const { return pattern_; }

    Interval interval(std::uint64_t idx) const {
        std::uint64_t rep = idx / pattern_.size(), pos = idx % pattern_.size();
        Time b = static_cast<Time>(rep) * period_ + offsets_[pos];
        return {b, b + pattern_[pos]};
    }

    Assignment submit(const Job& job) {
        std::uint64_t idx = static_cast<std::uint64_t>(job.release / period_) * pattern_.size();
        for (;; ++idx) {
            Interval iv = interval(idx);
            if (iv.begin < job.release || iv.length() < job.processing) continue;
            for (int q = 1; q <= m_; ++q)
                if (taken_.insert({idx, q}).second)
                    return {job.index, q, iv, iv.begin, iv.begin + job.processing, 0};
        }
    }

private:
    std::vector<Time> pattern_;
    std::vector<Time> offsets_;
    Time period_ = 0;
    int m_;
    std::set<std::pair<std::uint64_t, int>> taken_;
};

struct WarmupInstance {
    JobStream stream;
    PeriodicFirstFit scheduler;
};

inline WarmupInstance gen_warmup(WarmupVariant variant, unsigned d, std::uint64_t n, int machines = 1) {
    if (d < 2) throw std::invalid_argument("gen_warmup: d must be >= 2");
    std::vector<Job> jobs;
    std::vector<Time> pattern;
    std::int64_t idx = 0;
    if (variant == WarmupVariant::Ascending) {
        for (unsigned i = 0; i <= d; ++i) {
            pattern.push_back(Time{1} << i);
            jobs.push_back({++idx, 0, 1, Time{1} << i});
        }
        for (std::uint64_t i = 0; i < n; ++i) jobs.push_back({++idx, 0, 1, 1});
    } else {
        for (unsigned i = 0; i <= d; ++i)
            for (Time r = 0; r < (Time{1} << (d - i)); ++r) pattern.push_back(Time{1} << i);
        for (Time i = 0; i < (Time{1} << (d / 2)); ++i) jobs.push_back({++idx, 0, 1, 2});
        jobs.push_back({++idx, 0, 1, Time{1} << d});
    }
    return {JobStream::from_jobs(std::move(jobs)), PeriodicFirstFit(std::move(pattern), machines)};
}

/// (n-k) 2^{n-k} jobs of size 2^k, then 2^{n-i} jobs of size 2^i for i = k-1..0,
/// then 2^n unit jobs; all released at 0.
inline JobStream gen_static_lb(unsigned n, unsigned k) {
    if (k >= n) throw std::invalid_argument("gen_static_lb: requires k < n");
    if (n > 30) throw std::invalid_argument("gen_static_lb: n too large");
    std::vector<Job> jobs;
    std::int64_t idx = 0;
    auto emit = [&](std::uint64_t count, Time p) {
        for (std::uint64_t c = 0; c < count; ++c) jobs.push_back({++idx, 0, 1, p});
    };
    emit(static_cast<std::uint64_t>(n - k) << (n - k), Time{1} << k);
    for (unsigned i = k; i-- > 0;) emit(std::uint64_t{1} << (n - i), Time{1} << i);
    emit(std::uint64_t{1} << n, 1);
    return JobStream::from_jobs(std::move(jobs));
}

} // namespace promptsched
