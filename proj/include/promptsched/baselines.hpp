#pragma once

// Reference schedulers: SRPT / WSRPT (preemptive), Smith's rule and FIFO
// (non-preemptive), and an exhaustive preemptive optimum for tiny instances.

#include "promptsched/core_model.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace promptsched {

enum class PriorityRule { SRPT, WSRPT };

namespace detail {

// Event-driven form of the unit-slice simulation: between two events the set
// of running jobs cannot change, because running jobs only improve their key.
inline PreemptiveSchedule priority_schedule(const JobStream& stream, int m, PriorityRule rule) {
    if (m < 1) throw std::invalid_argument("machine count must be >= 1");
    const std::size_t n = stream.jobs.size();
    std::vector<Time> rem(n);
    for (std::size_t i = 0; i < n; ++i) rem[i] = stream.jobs[i].processing;

    auto before = [&](std::size_t a, std::size_t b) {
        if (rule == PriorityRule::SRPT) {
            if (rem[a] != rem[b]) return rem[a] < rem[b];
        } else {
            BigInt lhs = stream.jobs[a].weight * rem[b];
            BigInt rhs = stream.jobs[b].weight * rem[a];
            if (lhs != rhs) return lhs > rhs;
        }
        return stream.jobs[a].index < stream.jobs[b].index;
    };
    std::set<std::size_t, decltype(before)> ready(before);

    PreemptiveSchedule ps;
    ps.machines = m;
    ps.completion.assign(n, 0);
    std::vector<int> machine_of(n, 0);  // machine in the previous step, 0 if not running
    std::vector<std::size_t> open_run(n, 0);
    std::vector<std::size_t> prev;
    std::size_t next = 0, done = 0;
    Time t = n ? stream.jobs[0].release : 0;

    while (done < n) {
        while (next < n && stream.jobs[next].release <= t) ready.insert(next++);
        if (ready.empty()) {
            t = stream.jobs[next].release;
            continue;
        }
        std::vector<std::size_t> run;
        for (auto it = ready.begin(); it != ready.end() && static_cast<int>(run.size()) < m; ++it) run.push_back(*it);

        std::vector<bool> taken(m + 1, false);
        std::vector<int> assigned(run.size(), 0);
        for (std::size_t r = 0; r < run.size(); ++r)
            if (machine_of[run[r]]) {
                assigned[r] = machine_of[run[r]];
                taken[assigned[r]] = true;
            }
        int q = 1;
        for (std::size_t r = 0; r < run.size(); ++r)
            if (!assigned[r]) {
                while (taken[q]) ++q;
                assigned[r] = q;
                taken[q] = true;
            }

        Time step = rem[run.front()];
        for (std::size_t i : run) step = std::min(step, rem[i]);
        if (next < n) step = std::min(step, stream.jobs[next].release - t);

        for (std::size_t r = 0; r < run.size(); ++r) {
            std::size_t i = run[r];
            if (machine_of[i] == assigned[r] && ps.runs[open_run[i]].end == t) {
                ps.runs[open_run[i]].end = t + step;
            } else {
                open_run[i] = ps.runs.size();
                ps.runs.push_back({assigned[r], t, t + step, stream.jobs[i].index});
            }
        }
        for (std::size_t i : prev) machine_of[i] = 0;
        for (std::size_t i : run) ready.erase(i);
        t += step;
        prev.clear();
        for (std::size_t r = 0; r < run.size(); ++r) {
            std::size_t i = run[r];
            rem[i] -= step;
            if (rem[i] == 0) {
                ps.completion[i] = t;
                ++done;
            } else {
                machine_of[i] = assigned[r];
                prev.push_back(i);
                ready.insert(i);
            }
        }
    }
    return ps;
}

} // namespace detail

inline PreemptiveSchedule srpt(const JobStream& stream, int m) {
    return detail::priority_schedule(stream, m, PriorityRule::SRPT);
}

inline PreemptiveSchedule wsrpt(const JobStream& stream, int m) {
    return detail::priority_schedule(stream, m, PriorityRule::WSRPT);
}

namespace detail {

inline Schedule list_schedule(const JobStream& stream, int m, const std::vector<std::size_t>& order) {
    if (m < 1) throw std::invalid_argument("machine count must be >= 1");
    using Slot = std::pair<Time, int>;  // (free at, machine)
    std::priority_queue<Slot, std::vector<Slot>, std::greater<>> free;
    for (int q = 1; q <= m; ++q) free.push({0, q});
    Schedule s;
    s.machines = m;
    s.assignments.resize(stream.jobs.size());
    for (std::size_t i : order) {
        const Job& j = stream.jobs[i];
        auto [at, q] = free.top();
        free.pop();
        Time start = std::max(at, j.release);
        s.assignments[i] = {j.index, q, {start, start + j.processing}, start, start + j.processing, 0};
        free.push({start + j.processing, q});
    }
    return s;
}

} // namespace detail

/// Smith's rule at a common release: descending w/p, ties by index.
inline Schedule spt_offline(const JobStream& stream, int m) {
    for (const Job& j : stream.jobs)
        if (j.release != stream.jobs.front().release)
            throw std::invalid_argument("spt_offline requires a common release time");
    std::vector<std::size_t> order(stream.jobs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Job& x = stream.jobs[a];
        const Job& y = stream.jobs[b];
        BigInt lhs = x.weight * y.processing, rhs = y.weight * x.processing;
        if (lhs != rhs) return lhs > rhs;
        return x.index < y.index;
    });
    return detail::list_schedule(stream, m, order);
}

/// Index order; with non-decreasing releases the earliest-free machine is the right pick.
inline Schedule fifo(const JobStream& stream, int m) {
    std::vector<std::size_t> order(stream.jobs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    return detail::list_schedule(stream, m, order);
}

/// Exact preemptive optimum by memoized search over (time, remaining vector).
inline PreemptiveSchedule brute_force_opt_preemptive(const JobStream& stream, int m) {
    const std::size_t n = stream.jobs.size();
    Time total = 0;
    for (const Job& j : stream.jobs) total += j.processing;
    if (n > 6 || total > 24 || m < 1 || m > 2)
        throw std::invalid_argument("brute_force_opt_preemptive: instance beyond n<=6, sum p<=24, m<=2");

    std::vector<Time> radix(n + 1, 1);
    for (std::size_t i = 0; i < n; ++i) radix[i + 1] = radix[i] * (stream.jobs[i].processing + 1);
    auto digit = [&](Time code, std::size_t i) { return code / radix[i] % (stream.jobs[i].processing + 1); };

    struct Best {
        BigInt cost;
        unsigned mask;  // jobs run in this slice
    };
    std::map<std::pair<Time, Time>, Best> memo;

    std::function<BigInt(Time, Time)> solve = [&](Time t, Time code) -> BigInt {
        if (code == 0) return 0;
        auto key = std::make_pair(t, code);
        if (auto it = memo.find(key); it != memo.end()) return it->second.cost;
        std::vector<std::size_t> avail;
        Time next_release = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (digit(code, i) == 0) continue;
            if (stream.jobs[i].release <= t) avail.push_back(i);
            else if (next_release < 0 || stream.jobs[i].release < next_release) next_release = stream.jobs[i].release;
        }
        Best best{0, 0};
        if (avail.empty()) {
            best.cost = solve(next_release, code);
        } else {
            // idling a machine while a job waits never helps, so run exactly min(m, |avail|) jobs
            std::size_t take = std::min<std::size_t>(m, avail.size());
            bool first = true;
            for (unsigned sub = 0; sub < (1u << avail.size()); ++sub) {
                if (static_cast<std::size_t>(std::popcount(sub)) != take) continue;
                Time nc = code;
                BigInt here = 0;
                unsigned mask = 0;
                for (std::size_t a = 0; a < avail.size(); ++a)
                    if (sub >> a & 1) {
                        std::size_t i = avail[a];
                        nc -= radix[i];
                        mask |= 1u << i;
                        if (digit(code, i) == 1) here += stream.jobs[i].weight * (t + 1);
                    }
                BigInt c = here + solve(t + 1, nc);
                if (first || c < best.cost) {
                    best = {c, mask};
                    first = false;
                }
            }
        }
        memo[key] = best;
        return best.cost;
    };

    Time code = 0;
    for (std::size_t i = 0; i < n; ++i) code += radix[i] * stream.jobs[i].processing;
    Time t = n ? stream.jobs.front().release : 0;
    solve(t, code);

    PreemptiveSchedule ps;
    ps.machines = m;
    ps.completion.assign(n, 0);
    while (code != 0) {
        const Best& b = memo.at({t, code});
        if (b.mask == 0) {  // idle until the next release
            Time nr = -1;
            for (std::size_t i = 0; i < n; ++i)
                if (digit(code, i) && stream.jobs[i].release > t && (nr < 0 || stream.jobs[i].release < nr))
                    nr = stream.jobs[i].release;
            t = nr;
            continue;
        }
        int q = 1;
        for (std::size_t i = 0; i < n; ++i)
            if (b.mask >> i & 1) {
                ps.runs.push_back({q++, t, t + 1, stream.jobs[i].index});
                if (digit(code, i) == 1) ps.completion[i] = t + 1;
                code -= radix[i];
            }
        ++t;
    }
    return ps;
}

/// Completion time per job (stream order) for either schedule kind.
inline std::vector<Time> completions(const Schedule& s, const JobStream& stream) {
    std::map<std::int64_t, Time> c;
    for (const Assignment& a : s.assignments) c[a.job] = a.completion;
    std::vector<Time> out;
    for (const Job& j : stream.jobs) out.push_back(c.at(j.index));
    return out;
}

inline std::vector<Time> completions(const PreemptiveSchedule& ps, const JobStream&) { return ps.completion; }

} // namespace promptsched
