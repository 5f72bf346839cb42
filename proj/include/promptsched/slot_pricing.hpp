#pragma once

// Priced unit slots for unit-length weighted jobs. Slot [x, x+1] carries the
// threshold R_inf[x+1]; prices follow a ladder built at each arrival time.

#include "promptsched/core_model.hpp"
#include "promptsched/sequences.hpp"
#include "promptsched/stream_io.hpp"

#include <json.hpp>

#include <bit>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace promptsched {

class SlotOccupancy {
public:
    explicit SlotOccupancy(int machines) : m_(machines) {
        if (machines < 1 || machines > 64) throw std::invalid_argument("machine count must be in [1, 64]");
        all_ = machines == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << machines) - 1;
    }

    int machines() const { return m_; }

    std::uint64_t mask(Time x) const {
        auto it = mask_.find(x);
        return it == mask_.end() ? 0 : it->second;
    }
    bool full(Time x) const { return mask(x) == all_; }
    bool is_free(Time x, int q) const { return !(mask(x) >> (q - 1) & 1); }

    int lowest_free_machine(Time x) const {
        std::uint64_t free = ~mask(x) & all_;
        return free ? std::countr_zero(free) + 1 : 0;
    }

    void occupy(Time x, int q) {
        if (q < 1 || q > m_) throw std::invalid_argument("machine out of range");
        std::uint64_t& mk = mask_[x];
        std::uint64_t bit = std::uint64_t{1} << (q - 1);
        if (mk & bit) throw std::logic_error("slot already occupied on this machine");
        mk |= bit;
        if (mk == all_) skip_[x] = x + 1;
    }

    /// Earliest slot >= x with at least one free machine.
    Time next_free(Time x) const {
        Time root = x;
        for (auto it = skip_.find(root); it != skip_.end(); it = skip_.find(root)) root = it->second;
        while (x != root) {
            auto it = skip_.find(x);
            Time nxt = it->second;
            it->second = root;
            x = nxt;
        }
        return root;
    }

private:
    int m_;
    std::uint64_t all_;
    std::unordered_map<Time, std::uint64_t> mask_;
    mutable std::unordered_map<Time, Time> skip_;
};

struct LadderStep {
    Time b = 0;
    std::uint64_t v_exponent = 0;  // v_i = 2^v_exponent
    BigInt price = 0;              // pi_i, charged on [b_i, b_{i-1})
};

struct PriceLadder {
    Time t = 0;
    std::vector<LadderStep> steps;  // steps[0] is (b_1, v_1 = 1, pi_1 = 0)

    /// Price of slot x (x >= steps.back().b).
    const BigInt& price_of(Time x) const {
        for (std::size_t i = steps.size(); i-- > 0;)
            if (i == 0 || x < steps[i - 1].b) return steps[i].price;
        return steps.front().price;
    }
};

/// Ladder over the slots at or after t that have a free machine. With nothing
/// occupied this is the plain ladder over R_inf from t.
inline PriceLadder compute_prices(const SlotOccupancy& occ, Time t) {
    PriceLadder lad;
    lad.t = t;
    std::vector<std::pair<Time, std::uint64_t>> before;  // free slots in [t, b_1) with threshold exponents
    Time x = occ.next_free(t);
    for (;;) {
        std::uint64_t e = slot_threshold_exponent(x);
        if (e == 0) break;
        before.emplace_back(x, e);
        x = occ.next_free(x + 1);
    }
    lad.steps.push_back({x, 0, 0});
    // ladder points are the strict left-to-right minima of the thresholds, read right to left
    std::vector<std::size_t> records;
    for (std::size_t i = 0; i < before.size(); ++i)
        if (records.empty() || before[i].second < before[records.back()].second) records.push_back(i);
    for (std::size_t r = records.size(); r-- > 0;) {
        const auto& [b, e] = before[records[r]];
        const LadderStep& prev = lad.steps.back();
        lad.steps.push_back({b, e, prev.price + BigInt(prev.b - b) * big_pow2(static_cast<unsigned>(e))});
    }
    return lad;
}

inline BigInt agent_cost(Time x, const BigInt& price, const BigInt& w) { return BigInt(x + 1) * w + price; }

struct PricedSlot {
    Time slot = 0;
    int machine = 1;
    BigInt price = 0;
    std::uint64_t threshold_exponent = 0;
    BigInt cost = 0;
};

/// Argmin of the agent cost over the offered slots; ties go to the earlier slot.
/// Slots past b_1 cost 0 and come later, so the search stops at b_1.
inline PricedSlot choose_weighted(const SlotOccupancy& occ, const PriceLadder& lad, const BigInt& w) {
    if (w < 1) throw std::invalid_argument("weight must be >= 1");
    std::optional<PricedSlot> best;
    Time b1 = lad.steps.front().b;
    for (Time x = occ.next_free(lad.t); x <= b1; x = occ.next_free(x + 1)) {
        const BigInt& pi = lad.price_of(x);
        BigInt cost = agent_cost(x, pi, w);
        if (!best || cost < best->cost)
            best = PricedSlot{x, occ.lowest_free_machine(x), pi, slot_threshold_exponent(x), cost};
    }
    return *best;
}

/// Earliest free slot >= t whose threshold is at most w.
inline Time threshold_rule_slot(const SlotOccupancy& occ, Time t, const BigInt& w) {
    std::uint64_t cap = floor_log2(w);
    Time x = occ.next_free(t);
    while (slot_threshold_exponent(x) > cap) x = occ.next_free(x + 1);
    return x;
}

struct PricingTraceRecord {
    std::int64_t job = 0;
    Time release = 0;
    BigInt weight = 1;
    PriceLadder ladder;
    PricedSlot choice;
};

inline nlohmann::json to_json(const PricingTraceRecord& r) {
    auto num = [](const BigInt& v) { return big_to_json(v); };
    nlohmann::json ladder = nlohmann::json::array();
    for (const auto& s : r.ladder.steps)
        ladder.push_back({{"b", s.b}, {"v", num(big_pow2(static_cast<unsigned>(s.v_exponent)))}, {"pi", num(s.price)}});
    return {{"job", r.job},       {"release", r.release},      {"w", num(r.weight)},
            {"ladder", ladder},   {"slot", r.choice.slot},     {"machine", r.choice.machine},
            {"price", num(r.choice.price)}, {"xi", num(r.choice.cost)}};
}

class SlotPricing {
public:
    explicit SlotPricing(int machines, bool keep_trace = true) : occ_(machines), keep_trace_(keep_trace) {}

    int machines() const { return occ_.machines(); }
    const SlotOccupancy& occupancy() const { return occ_; }
    const std::vector<PricingTraceRecord>& trace() const { return trace_; }

    Assignment submit(const Job& job) {
        if (job.processing != 1) throw std::invalid_argument("slot pricing serves unit-length jobs only");
        if (job.release < last_release_) throw std::invalid_argument("releases must be non-decreasing");
        last_release_ = job.release;
        PriceLadder lad = compute_prices(occ_, job.release);
        PricedSlot pick = choose_weighted(occ_, lad, job.weight);
        occ_.occupy(pick.slot, pick.machine);
        if (keep_trace_) trace_.push_back({job.index, job.release, job.weight, std::move(lad), pick});
        return {job.index, pick.machine, {pick.slot, pick.slot + 1}, pick.slot, pick.slot + 1, pick.price};
    }

private:
    SlotOccupancy occ_;
    bool keep_trace_;
    Time last_release_ = 0;
    std::vector<PricingTraceRecord> trace_;
};

struct PricingRun {
    Schedule schedule;
    std::vector<PricingTraceRecord> trace;
};

inline PricingRun run_pricing(const JobStream& stream, int machines, bool keep_trace = true) {
    for (const Job& j : stream.jobs)
        if (j.processing != 1)
            throw std::invalid_argument("run_pricing: job " + std::to_string(j.index) + " has non-unit processing time");
    SlotPricing mech(machines, keep_trace);
    PricingRun run;
    run.schedule.machines = machines;
    for (const Job& j : stream.jobs) run.schedule.assignments.push_back(mech.submit(j));
    run.trace = mech.trace();
    return run;
}

} // namespace promptsched
