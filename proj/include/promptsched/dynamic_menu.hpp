#pragma once

// Dynamic interval menus for unit-weight jobs: configuration state,
// tau(A, t), menu enumeration, rational choice, and the four update rows.

#include "promptsched/core_model.hpp"
#include "promptsched/partition.hpp"
#include "promptsched/trace.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace promptsched {

struct StateEntry {
    unsigned order = 0;
    Time start = 0;

    Time end() const { return s_end(order, start); }
    bool operator==(const StateEntry&) const = default;
};

struct State {
    std::vector<StateEntry> entries;

    std::size_t length() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    // b(A_l) and e(A_l); both 0 for the empty state
    Time tentative_begin() const { return empty() ? 0 : entries.back().start; }
    Time tentative_end() const { return empty() ? 0 : entries.back().end(); }
};

enum class TableRow : int { Unchanged = 1, AppendAtRelease = 2, AppendAtEnd = 3, Extend = 4 };

struct MenuEntry {
    Interval interval;
    int machine = 1;
    BigInt price = 0;
};

/// tau(A, t) as a list of segments, the last one unbounded.
inline std::vector<Segment> tau(const State& s, Time t) {
    std::vector<Segment> out;
    bool past = s.empty() || t >= s.tentative_end();
    std::size_t fixed = past ? s.entries.size() : s.entries.size() - 1;
    for (std::size_t i = 0; i < fixed; ++i) out.push_back({s.entries[i].start, s.entries[i].order});
    out.push_back({past ? t : s.tentative_begin(), std::nullopt});
    return out;
}

/// First `count` intervals of tau(A, t), in time order.
inline std::vector<Interval> tau_prefix(const State& s, Time t, std::size_t count) {
    std::vector<Interval> out;
    for (const Segment& seg : tau(s, t)) {
        SInfinityCursor cur(seg.origin);
        std::uint64_t n = seg.order ? s_length(*seg.order) : ~std::uint64_t{0};
        for (std::uint64_t i = 0; i < n && out.size() < count; ++i) out.push_back(cur.next());
        if (out.size() >= count) break;
    }
    return out;
}

class DynamicMenu {
public:
    explicit DynamicMenu(int machines, bool trace_frontier = true)
        : occ_(machines), trace_frontier_(trace_frontier) {}

    int machines() const { return occ_.machines(); }
    const State& state() const { return state_; }
    const IntervalOccupancy& occupancy() const { return occ_; }
    const std::vector<IntervalTraceRecord>& trace() const { return trace_; }

    /// Segments of tau(state, t) that still reach past t.
    std::vector<Segment> live_segments(Time t) const {
        std::vector<Segment> all = tau(state_, t);
        auto first = std::find_if(all.begin(), all.end(), [&](const Segment& s) { return s.end() > t; });
        return {first, all.end()};
    }

    /// Offered entries (every free (I, q) with b(I) >= t), ascending by start then machine.
    std::vector<MenuEntry> menu_prefix(Time t, std::size_t count) const {
        std::vector<MenuEntry> out;
        for (const Segment& seg : live_segments(t)) {
            SInfinityCursor cur(seg.origin);
            std::uint64_t n = seg.order ? s_length(*seg.order) : ~std::uint64_t{0};
            for (std::uint64_t i = 0; i < n && out.size() < count; ++i) {
                Interval iv = cur.next();
                if (iv.begin < t) continue;
                for (int q : occ_.free_machines(iv.begin)) {
                    if (out.size() >= count) break;
                    out.push_back({iv, q, 0});
                }
            }
            if (out.size() >= count) break;
        }
        return out;
    }

    /// Earliest offered interval of each strictly longer length class.
    std::vector<FrontierEntry> frontier(Time t, std::size_t classes = 8) const {
        std::vector<FrontierEntry> out;
        unsigned k = 0;
        while (out.size() < classes) {
            FreeHit h = search(t, k);
            out.push_back({h.interval, occ_.free_machines(h.interval.begin)});
            k = floor_log2(static_cast<std::uint64_t>(h.interval.length())) + 1;
        }
        return out;
    }

    MenuEntry choose_unit_weight(Time t, Time p) const {
        FreeHit h = search(t, exponent_of(p));
        return {h.interval, h.machine, 0};
    }

    TableRow update_state(const Job& job, const MenuEntry& choice) {
        check_choice(job, choice);
        unsigned k = exponent_of(job.processing);
        Time c = choice.interval.begin + job.processing;
        Time e_last = state_.tentative_end();
        TableRow row;
        if (!state_.empty() && c <= e_last) {
            row = TableRow::Unchanged;
        } else if (job.release >= e_last) {
            state_.entries.push_back({k, job.release});
            row = TableRow::AppendAtRelease;
        } else if (k <= state_.entries.back().order) {
            state_.entries.push_back({k, e_last});
            row = TableRow::AppendAtEnd;
        } else {
            state_.entries.back().order = k;
            row = TableRow::Extend;
        }
        if (row != TableRow::Unchanged) {
            const StateEntry& t = state_.entries.back();
            Interval last{t.end() - job.processing, t.end()};
            if (choice.interval != last)
                throw std::logic_error("update_state: chosen interval is not the last interval of the new tentative entry");
        }
        record_occupancy(choice);
        return row;
    }

    Assignment submit(const Job& job) {
        if (job.weight != 1) throw std::invalid_argument("dynamic menu serves unit-weight jobs only");
        if (job.release < last_release_) throw std::invalid_argument("releases must be non-decreasing");
        last_release_ = job.release;
        IntervalTraceRecord rec;
        rec.job = job.index;
        rec.release = job.release;
        rec.processing = job.processing;
        if (trace_frontier_) rec.frontier = frontier(job.release);
        MenuEntry choice = choose_unit_weight(job.release, job.processing);
        TableRow row = update_state(job, choice);
        rec.chosen = choice.interval;
        rec.machine = choice.machine;
        rec.row = static_cast<int>(row);
        rec.state_length = state_.length();
        trace_.push_back(std::move(rec));
        return {job.index, choice.machine, choice.interval, choice.interval.begin,
                choice.interval.begin + job.processing, 0};
    }

private:
    static unsigned exponent_of(Time p) {
        if (p < 1 || !is_pow2(static_cast<std::uint64_t>(p)))
            throw std::invalid_argument("processing time must be a power of 2 (normalize the stream)");
        return floor_log2(static_cast<std::uint64_t>(p));
    }

    FreeHit search(Time t, unsigned k) const {
        for (const Segment& seg : live_segments(t))
            if (auto h = first_free_in_segment(occ_, seg, k, t)) return *h;
        throw std::logic_error("no free interval in tau");  // unreachable: the last segment is unbounded
    }

    void check_choice(const Job& job, const MenuEntry& choice) const {
        const Interval& iv = choice.interval;
        bool ok = iv.begin >= job.release && iv.length() >= job.processing && choice.machine >= 1 &&
                  choice.machine <= machines() && occ_.is_free(iv.begin, choice.machine);
        if (ok) {
            ok = false;
            for (const Segment& seg : live_segments(job.release))
                if (seg.origin <= iv.begin && iv.begin < seg.end()) {
                    ok = ordinal_in_segment(seg, iv).has_value();
                    break;
                }
        }
        if (!ok) throw std::invalid_argument("update_state: choice inconsistent with menu for job " + std::to_string(job.index));
    }

    void record_occupancy(const MenuEntry& choice) {
        const Interval& iv = choice.interval;
        auto it = std::upper_bound(state_.entries.begin(), state_.entries.end(), iv.begin,
                                   [](Time b, const StateEntry& e) { return b < e.start; });
        if (it == state_.entries.begin()) throw std::logic_error("occupied interval outside the state");
        const StateEntry& owner = *std::prev(it);
        Segment seg{owner.start, owner.order};
        auto j = ordinal_in_segment(seg, iv);
        if (!j) throw std::logic_error("occupied interval is not part of the state partition");
        occ_.occupy(iv.begin, choice.machine, seg.origin, floor_log2(static_cast<std::uint64_t>(iv.length())), *j);
    }

    State state_;
    IntervalOccupancy occ_;
    bool trace_frontier_;
    Time last_release_ = 0;
    std::vector<IntervalTraceRecord> trace_;
};

struct DynamicRun {
    Schedule schedule;
    std::vector<IntervalTraceRecord> trace;
    State final_state;
};

inline DynamicRun run_dynamic(const JobStream& stream, int machines, bool trace_frontier = true) {
    for (const Job& j : stream.jobs)
        if (j.weight != 1) throw std::invalid_argument("run_dynamic: job " + std::to_string(j.index) + " has non-unit weight");
    DynamicMenu mech(machines, trace_frontier);
    DynamicRun run;
    run.schedule.machines = machines;
    for (const Job& j : stream.jobs) run.schedule.assignments.push_back(mech.submit(j));
    run.trace = mech.trace();
    run.final_state = mech.state();
    return run;
}

/// True when consecutive state entries abut (no empty stretch between them).
inline bool gap_free(const State& s) {
    for (std::size_t i = 1; i < s.entries.size(); ++i)
        if (s.entries[i - 1].end() != s.entries[i].start) return false;
    return true;
}

/// Pulls releases earlier so that no arrival opens a gap: whenever a job would
/// arrive after e(A_l), it and all later jobs are shifted back by the difference.
inline JobStream eliminate_gaps(const JobStream& stream, int machines) {
    JobStream out = stream;
    DynamicMenu mech(machines, false);
    Time shift = 0;
    for (Job& j : out.jobs) {
        j.release -= shift;
        if (!mech.state().empty() && j.release > mech.state().tentative_end()) {
            Time d = j.release - mech.state().tentative_end();
            shift += d;
            j.release -= d;
        }
        mech.submit(j);
    }
    out.refresh();
    return out;
}

} // namespace promptsched
