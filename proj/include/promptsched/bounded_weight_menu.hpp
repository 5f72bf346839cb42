#pragma once

// Static S_inf(0) partition with every interval replicated once per weight
// class (log2 B_max + 1 consecutive copies, thresholds 1, 2, ..., B_max).
// Each length class is priced with its own ladder over its free copies.

#include "promptsched/core_model.hpp"
#include "promptsched/partition.hpp"
#include "promptsched/trace.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace promptsched {

struct ReplicatedInterval {
    Interval base;
    unsigned copy = 0;
    Interval placed;
    BigInt threshold = 1;
};

inline unsigned class_count(std::uint64_t b_max) {
    if (!is_pow2(b_max)) throw std::invalid_argument("B_max must be a power of 2");
    return floor_log2(b_max) + 1;
}

inline std::vector<ReplicatedInterval> build_replicated_timeline(std::uint64_t b_max, Time horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    unsigned c = class_count(b_max);
    std::vector<ReplicatedInterval> out;
    SInfinityCursor cur(0);
    while (out.empty() || out.back().placed.end < horizon) {
        Interval base = cur.next();
        Time len = base.length();
        for (unsigned l = 0; l < c; ++l) {
            Time s = static_cast<Time>(c) * base.begin + static_cast<Time>(l) * len;
            out.push_back({base, l, {s, s + len}, big_pow2(l)});
        }
    }
    return out;
}

class CombinedMenu {
public:
    CombinedMenu(int machines, std::uint64_t b_max) : occ_(machines), b_max_(b_max), classes_(class_count(b_max)) {}

    int machines() const { return occ_.machines(); }
    std::uint64_t b_max() const { return b_max_; }
    const IntervalOccupancy& occupancy() const { return occ_; }
    const std::vector<IntervalTraceRecord>& trace() const { return trace_; }

    struct Offer {
        Interval placed;
        unsigned copy = 0;
        int machine = 1;
        BigInt price = 0;
        BigInt cost = 0;
    };

    /// Argmin of (b + p) w + price over the offered copies of length >= p.
    Offer choose(Time t, Time p, const BigInt& w) const {
        unsigned k = exponent_of(p);
        std::optional<Offer> best;
        for (unsigned e = k; e <= 56; ++e) {
            Time floor_start = static_cast<Time>(classes_) * detail::to_time(detail::checked_mul(e, detail::pow2(e)));
            if (best && BigInt(floor_start + p) * w > best->cost) break;
            for (const Offer& o : class_offers(t, e)) {
                BigInt cost = BigInt(o.placed.begin + p) * w + o.price;
                if (!best || cost < best->cost || (cost == best->cost && o.placed.begin < best->placed.begin)) {
                    best = o;
                    best->cost = cost;
                }
            }
        }
        if (!best) throw std::overflow_error("combined menu: search exceeded the 64-bit horizon");
        return *best;
    }

    /// Earliest free copy with length >= p and threshold <= w (reference rule).
    Interval earliest_eligible(Time t, Time p, const BigInt& w) const {
        unsigned cap = floor_log2(w);
        std::optional<Interval> best;
        for (unsigned e = exponent_of(p); e <= 56; ++e) {
            Time floor_start = static_cast<Time>(classes_) * detail::to_time(detail::checked_mul(e, detail::pow2(e)));
            if (best && floor_start >= best->begin) break;
            for (const Offer& o : class_offers(t, e))
                if (o.copy <= cap && (!best || o.placed.begin < best->begin)) best = o.placed;
        }
        return *best;
    }

    Assignment submit(const Job& job) {
        if (job.weight > b_max_) throw std::invalid_argument("job " + std::to_string(job.index) + ": weight exceeds B_max");
        if (job.release < last_release_) throw std::invalid_argument("releases must be non-decreasing");
        last_release_ = job.release;
        Offer o = choose(job.release, job.processing, job.weight);
        occ_.occupy(o.placed.begin, o.machine, 0, 0, 0);
        IntervalTraceRecord rec;
        rec.job = job.index;
        rec.release = job.release;
        rec.processing = job.processing;
        rec.weight = job.weight;
        rec.chosen = o.placed;
        rec.machine = o.machine;
        rec.copy_class = static_cast<int>(o.copy);
        rec.price = o.price;
        trace_.push_back(std::move(rec));
        return {job.index, o.machine, o.placed, o.placed.begin, o.placed.begin + job.processing, o.price};
    }

private:
    static unsigned exponent_of(Time p) {
        if (p < 1 || !is_pow2(static_cast<std::uint64_t>(p)))
            throw std::invalid_argument("processing time must be a power of 2 (normalize the stream)");
        return floor_log2(static_cast<std::uint64_t>(p));
    }

    // Free copies of length exactly 2^e starting at or after t, up to and
    // including the first free class-0 copy, each with its ladder price.
    std::vector<Offer> class_offers(Time t, unsigned e) const {
        Time len = detail::to_time(detail::pow2(e));
        Time c = classes_;
        Time lo = t - (c - 1) * len;
        Time base_floor = lo <= 0 ? 0 : (lo + c - 1) / c;
        std::vector<Offer> seen;
        for (std::uint64_t j = s_first_of_length_at_or_after(0, e, base_floor);; ++j) {
            Interval base = s_interval_of_length(0, e, j);
            bool done = false;
            for (unsigned l = 0; l < classes_ && !done; ++l) {
                Time s = c * base.begin + static_cast<Time>(l) * len;
                if (s < t || occ_.full(s)) continue;
                seen.push_back({{s, s + len}, l, occ_.lowest_free_machine(s), 0, 0});
                done = l == 0;
            }
            if (done) break;
        }
        // ladder over the copies before b_1 = seen.back()
        std::vector<std::size_t> records;
        for (std::size_t i = 0; i + 1 < seen.size(); ++i)
            if (records.empty() || seen[i].copy < seen[records.back()].copy) records.push_back(i);
        BigInt price = 0;
        Time prev_b = seen.back().placed.begin;
        std::size_t seg_end = seen.size() - 1;
        for (std::size_t r = records.size(); r-- > 0;) {
            const Offer& pt = seen[records[r]];
            price += BigInt(prev_b - pt.placed.begin) * big_pow2(pt.copy);
            for (std::size_t i = records[r]; i < seg_end; ++i) seen[i].price = price;
            seg_end = records[r];
            prev_b = pt.placed.begin;
        }
        return seen;
    }

    IntervalOccupancy occ_;
    std::uint64_t b_max_;
    unsigned classes_;
    Time last_release_ = 0;
    std::vector<IntervalTraceRecord> trace_;
};

struct CombinedRun {
    Schedule schedule;
    std::vector<IntervalTraceRecord> trace;
};

inline CombinedRun run_combined(const JobStream& stream, int machines, std::uint64_t b_max) {
    for (const Job& j : stream.jobs)
        if (j.weight > b_max) throw std::invalid_argument("run_combined: job " + std::to_string(j.index) + " has weight above B_max");
    CombinedMenu mech(machines, b_max);
    CombinedRun run;
    run.schedule.machines = machines;
    for (const Job& j : stream.jobs) run.schedule.assignments.push_back(mech.submit(j));
    run.trace = mech.trace();
    return run;
}

} // namespace promptsched
