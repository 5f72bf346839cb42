#pragma once

// S_k / S_inf interval sequences and R_i / R_inf threshold sequences.
// Elements are 1-indexed; everything is computed by descent over the
// recursive structure, never by materializing a prefix.

#include "promptsched/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace promptsched {

enum class SequenceKind { S, R };

struct RealizedSequence {
    SequenceKind kind = SequenceKind::S;
    unsigned order = 0;
    Time start = 0;
    std::vector<Interval> intervals;

    Time begin() const { return start; }
    Time end() const { return intervals.empty() ? start : intervals.back().end; }
};

namespace detail {

// n_k = |S_k| = 2^{k+1} - 1
inline std::uint64_t s_len(unsigned k) { return pow2(k + 1) - 1; }

inline unsigned s_order_covering(std::uint64_t i) {
    unsigned k = 0;
    while (s_len(k) < i) ++k;
    return k;
}

inline void require_index(std::uint64_t i) {
    if (i < 1) throw std::invalid_argument("sequence index must be >= 1");
}

} // namespace detail

/// Length of S_k.
inline std::uint64_t s_length(unsigned k) { return detail::s_len(k); }

/// Exponent e with S_inf[i] = 2^e.
inline unsigned s_exponent(std::uint64_t i) {
    detail::require_index(i);
    unsigned k = detail::s_order_covering(i);
    while (i != detail::s_len(k)) {
        std::uint64_t half = detail::s_len(k - 1);
        if (i > half) i -= half;
        --k;
    }
    return k;
}

inline std::uint64_t s_element(std::uint64_t i) { return detail::pow2(s_exponent(i)); }

/// gamma_i, the sum of the first i elements of S_inf.
inline std::uint64_t s_prefix_sum(std::uint64_t i) {
    detail::require_index(i);
    unsigned k = detail::s_order_covering(i);
    std::uint64_t acc = 0;
    for (;;) {
        if (i == detail::s_len(k))
            return detail::checked_add(acc, detail::checked_mul(k + 1, detail::pow2(k)));
        std::uint64_t half = detail::s_len(k - 1);
        if (i > half) {
            acc = detail::checked_add(acc, detail::checked_mul(k, detail::pow2(k - 1)));
            i -= half;
        }
        --k;
    }
}

/// Number of 1-valued elements among the first i elements of S_inf.
inline std::uint64_t s_prefix_ones(std::uint64_t i) {
    if (i == 0) return 0;
    unsigned k = detail::s_order_covering(i);
    std::uint64_t acc = 0;
    for (;;) {
        if (i == detail::s_len(k)) return acc + detail::pow2(k);
        std::uint64_t half = detail::s_len(k - 1);
        if (i > half) {
            acc += detail::pow2(k - 1);
            i -= half;
        }
        --k;
    }
}

/// Prefix sum of S_inf up to and including its j-th 1-valued element.
inline std::uint64_t s_prefix_sum_at_one(std::uint64_t j) {
    detail::require_index(j);
    if (j == 1) return 1;
    std::uint64_t m = (j + 1) / 2;
    std::uint64_t inner = s_prefix_sum_at_one(m) - m;
    std::uint64_t v = detail::checked_add(detail::checked_mul(4, m - 1), detail::checked_mul(2, inner));
    return detail::checked_add(v, (j % 2) ? 1 : 2);
}

/// The j-th interval of length exactly 2^e in S_inf(origin), j >= 1.
inline Interval s_interval_of_length(Time origin, unsigned e, std::uint64_t j) {
    std::uint64_t units = detail::checked_add(s_prefix_sum_at_one(j), detail::checked_mul(e, j));
    Time end = detail::time_add(origin, detail::to_time(detail::checked_mul(detail::pow2(e), units)));
    return {end - detail::to_time(detail::pow2(e)), end};
}

/// Smallest j whose length-2^e interval in S_inf(origin) starts at or after t.
inline std::uint64_t s_first_of_length_at_or_after(Time origin, unsigned e, Time t) {
    if (s_interval_of_length(origin, e, 1).begin >= t) return 1;
    std::uint64_t lo = 1, hi = 2;
    while (s_interval_of_length(origin, e, hi).begin < t) {
        lo = hi;
        hi = detail::checked_mul(hi, 2);
    }
    while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (s_interval_of_length(origin, e, mid).begin < t) lo = mid;
        else hi = mid;
    }
    return hi;
}

/// Number of length-2^e intervals inside S_d.
inline std::uint64_t s_count_of_length(unsigned e, unsigned d) {
    return e > d ? 0 : detail::pow2(d - e);
}

/// S_k as an integer list.
inline std::vector<std::uint64_t> s_values(unsigned k) {
    std::vector<std::uint64_t> out{1};
    for (unsigned i = 1; i <= k; ++i) {
        std::vector<std::uint64_t> next = out;
        next.insert(next.end(), out.begin(), out.end());
        next.push_back(detail::pow2(i));
        out = std::move(next);
    }
    return out;
}

inline RealizedSequence realize_s(unsigned k, Time t) {
    if (t < 0) throw std::invalid_argument("realize_s: negative start");
    RealizedSequence r{SequenceKind::S, k, t, {}};
    auto vals = s_values(k);
    r.intervals.reserve(vals.size());
    Time at = t;
    for (auto v : vals) {
        Time next = detail::time_add(at, detail::to_time(v));
        r.intervals.push_back({at, next});
        at = next;
    }
    return r;
}

/// e(S_k(t)) = t + (k+1) 2^k
inline Time s_end(unsigned k, Time t) {
    return detail::time_add(t, detail::to_time(detail::checked_mul(k + 1, detail::pow2(k))));
}

inline std::uint64_t count_sk_in_sd(unsigned k, unsigned d) {
    if (k > d) throw std::invalid_argument("count_sk_in_sd: k > d");
    return detail::pow2(d - k);
}

/// Walks S_inf(origin) one interval at a time.
class SInfinityCursor {
public:
    explicit SInfinityCursor(Time origin) : at_(origin) {}

    Interval next() {
        Time len = detail::to_time(s_element(pos_));
        Interval iv{at_, detail::time_add(at_, len)};
        at_ = iv.end;
        ++pos_;
        return iv;
    }

private:
    Time at_;
    std::uint64_t pos_ = 1;
};

// ---- R sequences ----

/// |R_i| = (i+2) 2^{i-1} for i >= 1, |R_0| = 1.
inline std::uint64_t r_length(unsigned i) {
    if (i == 0) return 1;
    return detail::checked_mul(i + 2, detail::pow2(i - 1));
}

/// Exponent e with R_inf[i] = 2^e.
inline std::uint64_t r_exponent(std::uint64_t i) {
    detail::require_index(i);
    unsigned k = 0;
    while (r_length(k) < i) ++k;
    for (;;) {
        if (k == 0) return 0;
        std::uint64_t prev = r_length(k - 1);
        if (i > 2 * prev) return detail::pow2(k - 1) + (i - 2 * prev) - 1;
        if (i > prev) i -= prev;
        --k;
    }
}

/// R_inf[i] as a 64-bit value; throws std::overflow_error past 2^63.
inline std::uint64_t r_element(std::uint64_t i) {
    std::uint64_t e = r_exponent(i);
    if (e >= 64) throw std::overflow_error("r_element: value exceeds 64 bits");
    return detail::pow2(static_cast<unsigned>(e));
}

inline BigInt r_threshold(std::uint64_t i) { return big_pow2(static_cast<unsigned>(r_exponent(i))); }

/// Exponents of R_i in order.
inline std::vector<std::uint64_t> r_exponents(unsigned i) {
    std::vector<std::uint64_t> out{0};
    for (unsigned k = 1; k <= i; ++k) {
        std::vector<std::uint64_t> next = out;
        next.insert(next.end(), out.begin(), out.end());
        for (std::uint64_t e = detail::pow2(k - 1); e <= detail::pow2(k) - 1; ++e) next.push_back(e);
        out = std::move(next);
    }
    return out;
}

/// Appearances of 2^k in R_i.
inline std::uint64_t count_weight_in_r(std::uint64_t k, unsigned i) {
    if (k == 0) return detail::pow2(i);
    unsigned lg = floor_log2(k);
    if (i < lg + 1) throw std::invalid_argument("count_weight_in_r: 2^k does not occur in R_i");
    return detail::pow2(i - 1 - lg);
}

/// R_k laid out as unit slots from t.
inline RealizedSequence realize_r(unsigned k, Time t) {
    RealizedSequence r{SequenceKind::R, k, t, {}};
    std::uint64_t n = r_length(k);
    r.intervals.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        Time b = detail::time_add(t, detail::to_time(i));
        r.intervals.push_back({b, b + 1});
    }
    return r;
}

/// Threshold exponent of unit slot [x, x+1].
inline std::uint64_t slot_threshold_exponent(Time x) {
    if (x < 0) throw std::invalid_argument("negative slot");
    return r_exponent(static_cast<std::uint64_t>(x) + 1);
}

} // namespace promptsched
