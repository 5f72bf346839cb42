#pragma once

// Fixed S_inf(0) partition on every machine, first-fit by arriving jobs,
// with an optional feedback mode that re-offers the unused tail of an interval.

#include "promptsched/adversary.hpp"
#include "promptsched/baselines.hpp"
#include "promptsched/core_model.hpp"
#include "promptsched/partition.hpp"
#include "promptsched/trace.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace promptsched {

class StaticMenu {
public:
    StaticMenu(int machines, bool feedback, bool trace_frontier = false)
        : occ_(machines), feedback_(feedback), trace_frontier_(trace_frontier) {}

    int machines() const { return occ_.machines(); }
    bool feedback() const { return feedback_; }
    const IntervalOccupancy& occupancy() const { return occ_; }
    const std::vector<IntervalTraceRecord>& trace() const { return trace_; }

    std::size_t remainder_count() const {
        std::size_t n = 0;
        for (const auto& [b, set] : remainders_) n += set.size();
        return n;
    }

    Assignment submit(const Job& job) {
        if (job.processing < 1 || !is_pow2(static_cast<std::uint64_t>(job.processing)))
            throw std::invalid_argument("processing time must be a power of 2 (normalize the stream)");
        if (job.release < last_release_) throw std::invalid_argument("releases must be non-decreasing");
        last_release_ = job.release;
        unsigned k = floor_log2(static_cast<std::uint64_t>(job.processing));

        IntervalTraceRecord rec;
        rec.job = job.index;
        rec.release = job.release;
        rec.processing = job.processing;
        if (trace_frontier_) rec.frontier = frontier(job.release);

        FreeHit part = *first_free_in_segment(occ_, whole_, k, job.release);
        auto rem = first_remainder(k, job.release);

        Interval chosen;
        int machine;
        if (rem && rem->first.first < part.interval.begin) {
            chosen = {rem->first.first, rem->second};
            machine = rem->first.second;
            remainders_[rem->bucket].erase(rem->first);
        } else {
            chosen = part.interval;
            machine = part.machine;
            occ_.occupy(chosen.begin, machine, 0, part.exponent, part.ordinal);
        }
        if (feedback_ && job.processing < chosen.length())
            add_remainder({chosen.begin + job.processing, chosen.end}, machine);

        rec.chosen = chosen;
        rec.machine = machine;
        trace_.push_back(std::move(rec));
        return {job.index, machine, chosen, chosen.begin, chosen.begin + job.processing, 0};
    }

    std::vector<FrontierEntry> frontier(Time t, std::size_t classes = 8) const {
        std::vector<FrontierEntry> out;
        unsigned k = 0;
        while (out.size() < classes) {
            FreeHit h = *first_free_in_segment(occ_, whole_, k, t);
            out.push_back({h.interval, occ_.free_machines(h.interval.begin)});
            k = floor_log2(static_cast<std::uint64_t>(h.interval.length())) + 1;
        }
        return out;
    }

private:
    using Key = std::pair<Time, int>;  // (start, machine)

    struct RemHit {
        Key first;
        Time second;
        unsigned bucket;
    };

    void add_remainder(Interval iv, int machine) {
        remainders_[floor_log2(static_cast<std::uint64_t>(iv.length()))][{iv.begin, machine}] = iv.end;
    }

    // bucket b holds remainders with floor(log2 length) == b, so buckets >= k all fit 2^k
    std::optional<RemHit> first_remainder(unsigned k, Time t) const {
        std::optional<RemHit> best;
        for (auto it = remainders_.lower_bound(k); it != remainders_.end(); ++it) {
            auto r = it->second.lower_bound({t, 0});
            if (r == it->second.end()) continue;
            if (!best || r->first < best->first) best = RemHit{r->first, r->second, it->first};
        }
        return best;
    }

    IntervalOccupancy occ_;
    bool feedback_;
    bool trace_frontier_;
    Segment whole_{0, std::nullopt};
    Time last_release_ = 0;
    std::map<unsigned, std::map<Key, Time>> remainders_;
    std::vector<IntervalTraceRecord> trace_;
};

struct StaticRun {
    Schedule schedule;
    std::vector<IntervalTraceRecord> trace;
};

inline StaticRun run_static(const JobStream& stream, int machines, bool feedback, bool trace_frontier = false) {
    StaticMenu mech(machines, feedback, trace_frontier);
    StaticRun run;
    run.schedule.machines = machines;
    run.schedule.whole_interval = !feedback;
    for (const Job& j : stream.jobs) run.schedule.assignments.push_back(mech.submit(j));
    run.trace = mech.trace();
    return run;
}

/// Largest per-size-class count, classes being 2^i < p <= 2^{i+1}.
inline std::uint64_t n_max(const JobStream& stream) {
    std::map<int, std::uint64_t> count;
    for (const Job& j : stream.jobs) {
        int cls = j.processing == 1 ? -1 : static_cast<int>(ceil_log2(static_cast<std::uint64_t>(j.processing))) - 1;
        ++count[cls];
    }
    std::uint64_t best = 0;
    for (auto& [c, n] : count) best = std::max(best, n);
    return best;
}

struct StaticLbReport {
    unsigned n = 0;
    unsigned k = 0;
    std::uint64_t jobs = 0;
    BigInt cost_alg = 0;
    BigInt cost_opt = 0;
    Rational ratio = 0;
};

/// Runs the feedback mechanism on one machine against gen_static_lb(n, k).
inline StaticLbReport static_lb_ratio(unsigned n, unsigned k) {
    JobStream s = gen_static_lb(n, k);
    StaticLbReport r;
    r.n = n;
    r.k = k;
    r.jobs = s.n();
    r.cost_alg = weighted_completion_sum(run_static(s, 1, true).schedule, s);
    r.cost_opt = weighted_completion_sum(spt_offline(s, 1), s);
    r.ratio = Rational(r.cost_alg, r.cost_opt);
    return r;
}

} // namespace promptsched
