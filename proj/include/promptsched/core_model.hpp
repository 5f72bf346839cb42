#pragma once

#include "promptsched/types.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace promptsched {

struct Job {
    std::int64_t index = 0;  // arrival ordinal, 1-based
    Time release = 0;
    BigInt weight = 1;
    Time processing = 1;
};

struct JobStream {
    std::vector<Job> jobs;
    Time p_max = 0;
    BigInt w_max = 0;
    bool processing_rounded = false;
    bool weight_rounded = false;

    std::size_t n() const { return jobs.size(); }

    /// Checks release order and field ranges, fills metadata.
    static JobStream from_jobs(std::vector<Job> jobs) {
        JobStream s;
        s.jobs = std::move(jobs);
        s.refresh();
        return s;
    }

    void refresh() {
        p_max = 0;
        w_max = 0;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const Job& j = jobs[i];
            if (j.processing < 1) throw std::invalid_argument("job " + std::to_string(j.index) + ": processing < 1");
            if (j.weight < 1) throw std::invalid_argument("job " + std::to_string(j.index) + ": weight < 1");
            if (j.release < 0) throw std::invalid_argument("job " + std::to_string(j.index) + ": negative release");
            if (i > 0 && j.release < jobs[i - 1].release)
                throw std::invalid_argument("job " + std::to_string(j.index) + ": release times must be non-decreasing");
            p_max = std::max(p_max, j.processing);
            if (j.weight > w_max) w_max = j.weight;
        }
    }

    /// Re-number jobs 1..n in their current order.
    void renumber() {
        for (std::size_t i = 0; i < jobs.size(); ++i) jobs[i].index = static_cast<std::int64_t>(i + 1);
    }
};

struct NormalizeFields {
    bool processing = true;
    bool weight = false;
};

/// Rounds p (and optionally w) up to the next power of two.
inline JobStream normalize(const JobStream& in, NormalizeFields fields = {}) {
    JobStream out = in;
    for (Job& j : out.jobs) {
        if (j.processing < 1 || j.weight < 1) throw std::invalid_argument("normalize: p and w must be >= 1");
        if (fields.processing) {
            Time p = detail::to_time(detail::pow2(ceil_log2(static_cast<std::uint64_t>(j.processing))));
            out.processing_rounded = out.processing_rounded || p != j.processing;
            j.processing = p;
        }
        if (fields.weight) {
            BigInt w = big_pow2(ceil_log2(j.weight));
            out.weight_rounded = out.weight_rounded || w != j.weight;
            j.weight = w;
        }
    }
    out.refresh();
    return out;
}

struct Assignment {
    std::int64_t job = 0;
    int machine = 1;  // 1-based
    Interval interval;
    Time start = 0;
    Time completion = 0;
    BigInt price = 0;
};

struct Schedule {
    int machines = 1;
    std::vector<Assignment> assignments;
    // false only for the feedback variant, where a job holds just [s, c)
    bool whole_interval = true;

    const Assignment& of(std::int64_t job) const {
        auto it = std::find_if(assignments.begin(), assignments.end(),
                               [&](const Assignment& a) { return a.job == job; });
        if (it == assignments.end()) throw std::out_of_range("no assignment for job " + std::to_string(job));
        return *it;
    }
};

struct Slice {
    int machine = 1;
    Time begin = 0;
    Time end = 0;
    std::int64_t job = 0;
};

/// Run-length form of the per-machine slice map.
struct PreemptiveSchedule {
    int machines = 1;
    std::vector<Slice> runs;
    std::vector<Time> completion;  // completion[i] belongs to stream.jobs[i]
};

enum class ViolationKind { Missing, Overlap, Promptness, Feasibility, Completion, Machine, Slices };

struct Violation {
    ViolationKind kind;
    std::int64_t job = 0;
    std::int64_t other = 0;
    std::string detail;
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::Missing: return "missing";
    case ViolationKind::Overlap: return "overlap";
    case ViolationKind::Promptness: return "promptness";
    case ViolationKind::Feasibility: return "feasibility";
    case ViolationKind::Completion: return "completion";
    case ViolationKind::Machine: return "machine";
    case ViolationKind::Slices: return "slices";
    }
    return "?";
}

namespace detail {

inline std::map<std::int64_t, const Job*> job_table(const JobStream& stream) {
    std::map<std::int64_t, const Job*> t;
    for (const Job& j : stream.jobs) t[j.index] = &j;
    return t;
}

} // namespace detail

inline std::vector<Violation> validate(const Schedule& schedule, const JobStream& stream) {
    std::vector<Violation> out;
    auto jobs = detail::job_table(stream);
    std::map<std::int64_t, int> seen;
    struct Held { Time b, e; std::int64_t job; };
    std::map<int, std::vector<Held>> per_machine;

    for (const Assignment& a : schedule.assignments) {
        auto it = jobs.find(a.job);
        if (it == jobs.end()) {
            out.push_back({ViolationKind::Missing, a.job, 0, "assignment for unknown job"});
            continue;
        }
        const Job& j = *it->second;
        ++seen[a.job];
        if (a.machine < 1 || a.machine > schedule.machines)
            out.push_back({ViolationKind::Machine, a.job, 0, "machine " + std::to_string(a.machine) + " out of range"});
        if (a.start < j.release)
            out.push_back({ViolationKind::Promptness, a.job, 0,
                           "start " + std::to_string(a.start) + " < release " + std::to_string(j.release)});
        if (j.processing > a.interval.length())
            out.push_back({ViolationKind::Feasibility, a.job, 0,
                           "p=" + std::to_string(j.processing) + " exceeds interval length " +
                               std::to_string(a.interval.length())});
        if (a.start != a.interval.begin || a.completion != a.start + j.processing)
            out.push_back({ViolationKind::Completion, a.job, 0, "start/completion inconsistent with interval and p"});
        Held h = schedule.whole_interval ? Held{a.interval.begin, a.interval.end, a.job}
                                         : Held{a.start, a.start + j.processing, a.job};
        per_machine[a.machine].push_back(h);
    }
    for (const Job& j : stream.jobs)
        if (seen[j.index] != 1)
            out.push_back({ViolationKind::Missing, j.index, 0,
                           "job assigned " + std::to_string(seen[j.index]) + " times"});

    for (auto& [q, held] : per_machine) {
        std::sort(held.begin(), held.end(), [](const Held& x, const Held& y) {
            return x.b != y.b ? x.b < y.b : x.job < y.job;
        });
        std::size_t open = 0;  // earlier run reaching furthest right
        for (std::size_t i = 1; i < held.size(); ++i) {
            if (held[open].e > held[i].b)
                out.push_back({ViolationKind::Overlap, held[open].job, held[i].job, "machine " + std::to_string(q)});
            if (held[i].e > held[open].e) open = i;
        }
    }
    return out;
}

inline BigInt weighted_completion_sum(const Schedule& schedule, const JobStream& stream) {
    std::map<std::int64_t, Time> c;
    for (const Assignment& a : schedule.assignments) c[a.job] = a.completion;
    BigInt total = 0;
    for (const Job& j : stream.jobs) {
        auto it = c.find(j.index);
        if (it == c.end()) throw std::invalid_argument("missing assignment for job " + std::to_string(j.index));
        total += j.weight * it->second;
    }
    return total;
}

/// Checks the slice-map invariants of a preemptive schedule.
inline std::vector<Violation> validate_preemptive(const PreemptiveSchedule& ps, const JobStream& stream) {
    std::vector<Violation> out;
    std::map<std::int64_t, std::size_t> pos;
    for (std::size_t i = 0; i < stream.jobs.size(); ++i) pos[stream.jobs[i].index] = i;
    std::vector<Time> got(stream.jobs.size(), 0), last(stream.jobs.size(), 0);
    std::map<int, std::vector<Slice>> by_machine;
    std::map<std::int64_t, std::vector<Slice>> by_job;
    for (const Slice& s : ps.runs) {
        auto it = pos.find(s.job);
        if (it == pos.end() || s.end <= s.begin) {
            out.push_back({ViolationKind::Slices, s.job, 0, "malformed run"});
            continue;
        }
        const Job& j = stream.jobs[it->second];
        if (s.begin < j.release) out.push_back({ViolationKind::Promptness, s.job, 0, "runs before release"});
        got[it->second] += s.end - s.begin;
        last[it->second] = std::max(last[it->second], s.end);
        by_machine[s.machine].push_back(s);
        by_job[s.job].push_back(s);
    }
    auto overlapping = [](std::vector<Slice>& v) {
        std::sort(v.begin(), v.end(), [](const Slice& a, const Slice& b) { return a.begin < b.begin; });
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i].begin < v[i - 1].end) return true;
        return false;
    };
    for (auto& [q, v] : by_machine)
        if (overlapping(v)) out.push_back({ViolationKind::Overlap, 0, 0, "machine " + std::to_string(q) + " runs two jobs"});
    for (auto& [job, v] : by_job)
        if (overlapping(v)) out.push_back({ViolationKind::Overlap, job, job, "job on two machines at once"});
    for (std::size_t i = 0; i < stream.jobs.size(); ++i) {
        if (got[i] != stream.jobs[i].processing)
            out.push_back({ViolationKind::Slices, stream.jobs[i].index, 0,
                           "received " + std::to_string(got[i]) + " of " + std::to_string(stream.jobs[i].processing)});
        else if (i < ps.completion.size() && ps.completion[i] != last[i])
            out.push_back({ViolationKind::Completion, stream.jobs[i].index, 0, "completion disagrees with slices"});
    }
    return out;
}

inline BigInt preemptive_cost(const PreemptiveSchedule& ps, const JobStream& stream) {
    if (ps.completion.size() != stream.jobs.size())
        throw std::invalid_argument("preemptive_cost: completion vector does not cover the stream");
    std::vector<Time> got(stream.jobs.size(), 0);
    std::map<std::int64_t, std::size_t> pos;
    for (std::size_t i = 0; i < stream.jobs.size(); ++i) pos[stream.jobs[i].index] = i;
    for (const Slice& s : ps.runs) {
        auto it = pos.find(s.job);
        if (it != pos.end()) got[it->second] += s.end - s.begin;
    }
    BigInt total = 0;
    for (std::size_t i = 0; i < stream.jobs.size(); ++i) {
        if (got[i] < stream.jobs[i].processing)
            throw std::invalid_argument("preemptive_cost: job " + std::to_string(stream.jobs[i].index) +
                                        " received fewer than p_j slices");
        total += stream.jobs[i].weight * ps.completion[i];
    }
    return total;
}

} // namespace promptsched
