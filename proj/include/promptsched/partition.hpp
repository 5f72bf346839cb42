#pragma once

// Occupancy over S-partitions and "first free interval of length >= 2^k".
// Intervals are addressed by (segment origin, length exponent e, ordinal j);
// full intervals are skipped through a path-compressed next pointer.

#include "promptsched/sequences.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace promptsched {

struct FreeHit {
    Interval interval;
    int machine = 1;  // lowest free machine
    Time origin = 0;
    unsigned exponent = 0;
    std::uint64_t ordinal = 1;
};

class IntervalOccupancy {
public:
    explicit IntervalOccupancy(int machines) : m_(machines) {
        if (machines < 1 || machines > 64) throw std::invalid_argument("machine count must be in [1, 64]");
        all_ = machines == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << machines) - 1;
    }

    int machines() const { return m_; }

    std::uint64_t mask(Time start) const {
        auto it = mask_.find(start);
        return it == mask_.end() ? 0 : it->second;
    }

    bool is_free(Time start, int q) const { return !(mask(start) >> (q - 1) & 1); }
    bool full(Time start) const { return mask(start) == all_; }

    /// 0 when every machine is taken.
    int lowest_free_machine(Time start) const {
        std::uint64_t free = ~mask(start) & all_;
        return free ? std::countr_zero(free) + 1 : 0;
    }

    std::vector<int> free_machines(Time start) const {
        std::vector<int> out;
        std::uint64_t free = ~mask(start) & all_;
        while (free) {
            out.push_back(std::countr_zero(free) + 1);
            free &= free - 1;
        }
        return out;
    }

    void occupy(Time start, int q, Time origin, unsigned e, std::uint64_t j) {
        if (q < 1 || q > m_) throw std::invalid_argument("machine out of range");
        std::uint64_t& mk = mask_[start];
        std::uint64_t bit = std::uint64_t{1} << (q - 1);
        if (mk & bit) throw std::logic_error("interval already occupied on this machine");
        mk |= bit;
        if (mk == all_) skip_[Key{origin, e, j}] = j + 1;
    }

    /// Smallest ordinal >= j in the (origin, e) family not known to be full.
    std::uint64_t next_candidate(Time origin, unsigned e, std::uint64_t j) const {
        std::uint64_t root = j;
        for (auto it = skip_.find(Key{origin, e, root}); it != skip_.end(); it = skip_.find(Key{origin, e, root}))
            root = it->second;
        while (j != root) {
            auto it = skip_.find(Key{origin, e, j});
            std::uint64_t nxt = it->second;
            it->second = root;
            j = nxt;
        }
        return root;
    }

private:
    struct Key {
        Time origin;
        unsigned e;
        std::uint64_t j;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = std::hash<Time>{}(k.origin);
            h ^= std::hash<std::uint64_t>{}(k.j) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= std::hash<unsigned>{}(k.e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        }
    };

    int m_;
    std::uint64_t all_;
    std::unordered_map<Time, std::uint64_t> mask_;
    mutable std::unordered_map<Key, std::uint64_t, KeyHash> skip_;
};

/// One piece of a partition: S_order(origin), or S_inf(origin) when order is empty.
struct Segment {
    Time origin = 0;
    std::optional<unsigned> order;

    Time end() const { return order ? s_end(*order, origin) : std::numeric_limits<Time>::max(); }
};

/// Earliest interval of length >= 2^k inside the segment, starting at or after t,
/// with at least one free machine.
inline std::optional<FreeHit> first_free_in_segment(const IntervalOccupancy& occ, const Segment& seg, unsigned k,
                                                    Time t) {
    std::optional<FreeHit> best;
    unsigned top = seg.order ? *seg.order : 57;
    for (unsigned e = k; e <= top; ++e) {
        if (!seg.order) {
            // no length-2^e interval of S_inf(origin) starts before origin + e*2^e
            Time floor_start = detail::time_add(seg.origin, detail::to_time(detail::checked_mul(e, detail::pow2(e))));
            if (best && floor_start >= best->interval.begin) break;
        }
        std::uint64_t j = s_first_of_length_at_or_after(seg.origin, e, t);
        j = occ.next_candidate(seg.origin, e, j);
        if (seg.order && j > s_count_of_length(e, *seg.order)) continue;
        Interval iv = s_interval_of_length(seg.origin, e, j);
        if (!best || iv.begin < best->interval.begin)
            best = FreeHit{iv, occ.lowest_free_machine(iv.begin), seg.origin, e, j};
    }
    if (!best && !seg.order) throw std::overflow_error("first_free_in_segment: search exceeded the 64-bit horizon");
    return best;
}

/// Ordinal of iv within the segment's length class, if iv is an interval of it.
inline std::optional<std::uint64_t> ordinal_in_segment(const Segment& seg, const Interval& iv) {
    Time len = iv.length();
    if (len < 1 || !is_pow2(static_cast<std::uint64_t>(len)) || iv.begin < seg.origin || iv.end > seg.end())
        return std::nullopt;
    unsigned e = floor_log2(static_cast<std::uint64_t>(len));
    if (seg.order && e > *seg.order) return std::nullopt;
    std::uint64_t j = s_first_of_length_at_or_after(seg.origin, e, iv.begin);
    if (seg.order && j > s_count_of_length(e, *seg.order)) return std::nullopt;
    if (s_interval_of_length(seg.origin, e, j) != iv) return std::nullopt;
    return j;
}

} // namespace promptsched
