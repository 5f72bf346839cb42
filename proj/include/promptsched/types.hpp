#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace promptsched {

using Time = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct Interval {
    Time begin = 0;
    Time end = 0;

    Time length() const { return end - begin; }
    bool operator==(const Interval&) const = default;
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("promptsched: 64-bit overflow");
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("promptsched: 64-bit overflow");
    return r;
}

inline std::uint64_t pow2(unsigned e) {
    if (e >= 64) throw std::overflow_error("promptsched: 2^e does not fit in 64 bits");
    return std::uint64_t{1} << e;
}

inline Time to_time(std::uint64_t v) {
    if (v > static_cast<std::uint64_t>(std::numeric_limits<Time>::max()))
        throw std::overflow_error("promptsched: time exceeds int64");
    return static_cast<Time>(v);
}

inline Time time_add(Time a, Time b) {
    Time r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("promptsched: time overflow");
    return r;
}

} // namespace detail

inline bool is_pow2(std::uint64_t v) { return v != 0 && std::has_single_bit(v); }

inline unsigned floor_log2(std::uint64_t v) {
    if (v == 0) throw std::invalid_argument("floor_log2(0)");
    return static_cast<unsigned>(std::bit_width(v) - 1);
}

inline unsigned ceil_log2(std::uint64_t v) {
    if (v == 0) throw std::invalid_argument("ceil_log2(0)");
    return v == 1 ? 0u : static_cast<unsigned>(std::bit_width(v - 1));
}

inline unsigned floor_log2(const BigInt& v) {
    if (v <= 0) throw std::invalid_argument("floor_log2 of non-positive value");
    return static_cast<unsigned>(boost::multiprecision::msb(v));
}

inline unsigned ceil_log2(const BigInt& v) {
    unsigned f = floor_log2(v);
    return (BigInt{1} << f) == v ? f : f + 1;
}

inline BigInt big_pow2(unsigned e) { return BigInt{1} << e; }

/// Fixed-point rendering of an exact ratio; presentation only.
inline std::string decimal_string(const Rational& q, unsigned digits = 6) {
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    BigInt scaled = (num * scale + den / 2) / den;
    std::string whole = BigInt(scaled / scale).str();
    std::string frac = BigInt(scaled % scale).str();
    if (frac.size() < digits) frac.insert(0, digits - frac.size(), '0');
    return (neg ? "-" : "") + whole + (digits ? "." + frac : "");
}

inline std::string rational_string(const Rational& q) {
    return BigInt(boost::multiprecision::numerator(q)).str() + "/" +
           BigInt(boost::multiprecision::denominator(q)).str();
}

} // namespace promptsched
