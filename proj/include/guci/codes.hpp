#pragma once

// Universal codes of integers: bit-exact Elias gamma, delta and omega codecs,
// exact length functions for gamma, delta, omega, eta, theta and iota, and the
// per-code constants of the linear-in-log2 length bounds.
//
// eta, theta and iota are length oracles only; they have no codec.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "guci/bitio.hpp"
#include "guci/error.hpp"

namespace guci {

/// floor(log2 n) for n >= 1, computed from the bit width.
constexpr unsigned floor_log2(std::uint64_t n) noexcept {
    return static_cast<unsigned>(std::bit_width(n)) - 1;
}

namespace detail {
inline void require_positive(std::uint64_t m) {
    if (m == 0) {
        throw InvalidArgument("universal codes are defined on positive integers only");
    }
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Building blocks: unary alpha(m), binary beta(m), trimmed binary [beta(m)].

inline void write_unary(BitStream& out, std::uint64_t m) {
    detail::require_positive(m);
    for (std::uint64_t k = 1; k < m; ++k) {
        out.write_bit(false);
    }
    out.write_bit(true);
}

inline void write_binary(BitStream& out, std::uint64_t m) {
    detail::require_positive(m);
    out.write_bits(m, floor_log2(m) + 1);
}

/// beta(m) without its leading one; writes nothing for m == 1.
inline void write_binary_trimmed(BitStream& out, std::uint64_t m) {
    detail::require_positive(m);
    const unsigned width = floor_log2(m);
    if (width > 0) {
        out.write_bits(m & ((std::uint64_t{1} << width) - 1), width);
    }
}

inline BitStream unary(std::uint64_t m) {
    BitStream s;
    write_unary(s, m);
    return s;
}

inline BitStream binary(std::uint64_t m) {
    BitStream s;
    write_binary(s, m);
    return s;
}

inline BitStream binary_trimmed(std::uint64_t m) {
    BitStream s;
    write_binary_trimmed(s, m);
    return s;
}

// ---------------------------------------------------------------------------
// Codecs.

inline void gamma_encode(BitStream& out, std::uint64_t m) {
    detail::require_positive(m);
    write_unary(out, floor_log2(m) + 1);
    write_binary_trimmed(out, m);
}

inline std::uint64_t gamma_decode(BitReader& in) {
    unsigned zeros = 0;
    while (!in.read_bit()) {
        if (++zeros > 63) {
            throw CorruptStream("gamma prefix longer than 63 zeros");
        }
    }
    const std::uint64_t tail = zeros == 0 ? 0 : in.read_bits(zeros);
    return (std::uint64_t{1} << zeros) | tail;
}

inline void delta_encode(BitStream& out, std::uint64_t m) {
    detail::require_positive(m);
    gamma_encode(out, floor_log2(m) + 1);
    write_binary_trimmed(out, m);
}

inline std::uint64_t delta_decode(BitReader& in) {
    const std::uint64_t width = gamma_decode(in);
    if (width > 64) {
        throw CorruptStream("delta length field exceeds 64");
    }
    const auto k = static_cast<unsigned>(width - 1);
    const std::uint64_t tail = k == 0 ? 0 : in.read_bits(k);
    return (std::uint64_t{1} << k) | tail;
}

inline void omega_encode(BitStream& out, std::uint64_t m) {
    detail::require_positive(m);
    std::array<std::uint64_t, 8> groups{};
    std::size_t count = 0;
    for (std::uint64_t k = m; k > 1; k = floor_log2(k)) {
        groups[count++] = k;
    }
    while (count > 0) {
        write_binary(out, groups[--count]);
    }
    out.write_bit(false);
}

inline std::uint64_t omega_decode(BitReader& in) {
    std::uint64_t n = 1;
    while (in.read_bit()) {
        if (n > 63) {
            throw CorruptStream("omega group wider than 64 bits");
        }
        const auto k = static_cast<unsigned>(n);
        n = (std::uint64_t{1} << k) | in.read_bits(k);
    }
    return n;
}

// ---------------------------------------------------------------------------
// Exact length functions. Every code has L(1) = 1.

namespace lengths {

inline std::uint32_t gamma(std::uint64_t n) { return 1 + 2 * floor_log2(n); }

inline std::uint32_t delta(std::uint64_t n) {
    const unsigned k = floor_log2(n);
    return 1 + k + 2 * floor_log2(1 + std::uint64_t{k});
}

inline std::uint32_t eta(std::uint64_t n) {
    if (n == 1) {
        return 1;
    }
    const unsigned m = floor_log2(n - 1);
    return 3 + m + m / 2;
}

inline std::uint32_t theta(std::uint64_t n) {
    if (n == 1) {
        return 1;
    }
    const unsigned k = floor_log2(n);
    const unsigned j = floor_log2(k);
    return 3 + k + j + j / 2;
}

inline std::uint32_t iota(std::uint64_t n) {
    if (n == 1) {
        return 1;
    }
    const unsigned k = floor_log2(n);
    return 2 + k + (1 + k) / 2;
}

/// 1 + sum over the iterated floor-log chain n, lambda(n), ... down to 1.
inline std::uint32_t omega(std::uint64_t n) {
    if (n == 1) {
        return 1;
    }
    std::uint32_t total = 1;
    for (std::uint64_t k = floor_log2(n); ; k = floor_log2(k)) {
        total += 1 + static_cast<std::uint32_t>(k);
        if (k == 1) {
            break;
        }
    }
    return total;
}

}  // namespace lengths

// ---------------------------------------------------------------------------
// Length bound forms.

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    [[nodiscard]] constexpr double value() const noexcept {
        return static_cast<double>(num) / static_cast<double>(den);
    }
};

/// L * log2(base) <= a + b * log2(n). base = 2 gives the plain form
/// L <= a + b log2 n; other bases express constants with a log2 in the
/// denominator, e.g. 6 / log2(50) for eta.
struct LogLinearBound {
    Rational a;
    Rational b;
    std::uint32_t base = 2;

    /// Effective additive constant in L <= offset + slope * log2 n.
    [[nodiscard]] double offset() const { return a.value() / std::log2(static_cast<double>(base)); }
    [[nodiscard]] double slope() const { return b.value() / std::log2(static_cast<double>(base)); }
    [[nodiscard]] double at(std::uint64_t n) const {
        return offset() + slope() * std::log2(static_cast<double>(n));
    }

    /// Exact test of length <= bound(n), by integer comparison
    /// base^(D L) <= 2^A n^B with A = D a, B = D b.
    [[nodiscard]] bool holds(std::uint32_t length, std::uint64_t n) const {
        const std::int64_t d = std::lcm(a.den, b.den);
        const std::int64_t big_a = a.num * (d / a.den);
        const std::int64_t big_b = b.num * (d / b.den);
        const std::int64_t lhs_exp = d * static_cast<std::int64_t>(length);

        const double lhs = static_cast<double>(lhs_exp) * std::log2(static_cast<double>(base));
        const double rhs = static_cast<double>(big_a) + static_cast<double>(big_b) * std::log2(static_cast<double>(n));
        if (lhs < rhs - 1e-6) {
            return true;
        }
        if (lhs > rhs + 1e-6) {
            return false;
        }

        using boost::multiprecision::cpp_int;
        using boost::multiprecision::pow;
        cpp_int left = pow(cpp_int(base), static_cast<unsigned>(lhs_exp));
        cpp_int right = big_b >= 0 ? pow(cpp_int(n), static_cast<unsigned>(big_b)) : cpp_int(1);
        if (big_b < 0) {
            left *= pow(cpp_int(n), static_cast<unsigned>(-big_b));
        }
        if (big_a >= 0) {
            right <<= static_cast<unsigned>(big_a);
        } else {
            left <<= static_cast<unsigned>(-big_a);
        }
        return left <= right;
    }
};

/// L <= a + b * floor(log2 n), stated for n >= 2.
struct FloorBound {
    Rational a;
    Rational b;

    [[nodiscard]] bool holds(std::uint32_t length, std::uint64_t n) const {
        const std::int64_t d = std::lcm(a.den, b.den);
        return d * static_cast<std::int64_t>(length) <=
               a.num * (d / a.den) + b.num * (d / b.den) * static_cast<std::int64_t>(floor_log2(n));
    }
};

// ---------------------------------------------------------------------------
// Code descriptors.

enum class CodeId : std::uint8_t { gamma, delta, omega, eta, theta, iota };

struct UciCode {
    CodeId id;
    std::string_view name;
    std::uint32_t (*length_fn)(std::uint64_t);
    /// Single-byte identifier in the container header; only codes with a codec have one.
    std::optional<std::uint8_t> container_id;
    /// L <= a + b log2 n, feeding the 2a + b expansion bound.
    LogLinearBound linear;
    /// L <= b5 + 2 b5 log2 n, feeding the 2 b5 expansion bound.
    LogLinearBound doubling;
    /// L <= a + b floor(log2 n) for n >= 2, used by the P(0) threshold of the rate gap.
    FloorBound floor;
    /// L(n) <= L(n + 1) for all n.
    bool minimal;

    [[nodiscard]] bool has_codec() const noexcept { return container_id.has_value(); }

    [[nodiscard]] std::uint32_t length_of(std::uint64_t n) const {
        detail::require_positive(n);
        return length_fn(n);
    }

    void encode(BitStream& out, std::uint64_t n) const {
        switch (id) {
            case CodeId::gamma: return gamma_encode(out, n);
            case CodeId::delta: return delta_encode(out, n);
            case CodeId::omega: return omega_encode(out, n);
            default: throw InvalidArgument(std::string(name) + " code has no codec");
        }
    }

    [[nodiscard]] BitStream encode(std::uint64_t n) const {
        BitStream s;
        encode(s, n);
        return s;
    }

    std::uint64_t decode(BitReader& in) const {
        switch (id) {
            case CodeId::gamma: return gamma_decode(in);
            case CodeId::delta: return delta_decode(in);
            case CodeId::omega: return omega_decode(in);
            default: throw InvalidArgument(std::string(name) + " code has no codec");
        }
    }

    /// b5 of the doubling form.
    [[nodiscard]] double doubling_constant() const { return doubling.offset(); }
    /// 2a + b for the linear form.
    [[nodiscard]] double linear_expansion() const { return 2 * linear.offset() + linear.slope(); }
    /// 2 b5 for the doubling form.
    [[nodiscard]] double doubling_expansion() const { return 2 * doubling.offset(); }
};

namespace detail {

constexpr LogLinearBound doubling_bound(std::int64_t num, std::int64_t den, std::uint32_t base = 2) {
    return {{num, den}, {2 * num, den}, base};
}

// 6 / (1 + 2 log2 5) = 6 / log2 50.
constexpr LogLinearBound eta_bound = doubling_bound(6, 1, 50);

inline const std::array<UciCode, 6>& code_table() {
    static const std::array<UciCode, 6> table{{
        {CodeId::gamma, "gamma", &lengths::gamma, 0, doubling_bound(1, 1), doubling_bound(1, 1),
         {{1, 1}, {2, 1}}, true},
        {CodeId::delta, "delta", &lengths::delta, 1, doubling_bound(4, 3), doubling_bound(4, 3),
         {{4, 3}, {8, 3}}, true},
        {CodeId::omega, "omega", &lengths::omega, 2, doubling_bound(11, 9), doubling_bound(11, 9),
         {{3, 1}, {2, 1}}, true},
        {CodeId::eta, "eta", &lengths::eta, std::nullopt, eta_bound, eta_bound, {{3, 1}, {3, 2}}, true},
        {CodeId::theta, "theta", &lengths::theta, std::nullopt, doubling_bound(4, 3), doubling_bound(4, 3),
         {{4, 3}, {8, 3}}, true},
        {CodeId::iota, "iota", &lengths::iota, std::nullopt, doubling_bound(4, 3), doubling_bound(4, 3),
         {{5, 2}, {3, 2}}, true},
    }};
    return table;
}

}  // namespace detail

inline const std::array<UciCode, 6>& all_codes() { return detail::code_table(); }

inline const UciCode& code(CodeId id) { return all_codes()[static_cast<std::size_t>(id)]; }

inline const UciCode& code_by_name(std::string_view name) {
    for (const auto& c : all_codes()) {
        if (c.name == name) {
            return c;
        }
    }
    throw InvalidArgument("unknown code '" + std::string(name) + "'");
}

inline const UciCode& code_by_container_id(std::uint8_t id) {
    for (const auto& c : all_codes()) {
        if (c.container_id == id) {
            return c;
        }
    }
    throw CorruptStream("unknown code id " + std::to_string(id));
}

// ---------------------------------------------------------------------------
// Constant-length runs.

/// Maximal interval [first, last] on which L is constant.
struct LengthRun {
    std::uint64_t first;
    std::uint64_t last;
    std::uint32_t length;
};

/// Splits [1, up_to] into runs of constant length. All six length functions
/// depend on n only through floor(log2 n) or floor(log2 (n - 1)), so they are
/// constant between consecutive points of {1, 2, 3} U {2^k, 2^k + 1}.
inline std::vector<LengthRun> length_runs(const UciCode& c,
                                          std::uint64_t up_to = std::numeric_limits<std::uint64_t>::max()) {
    detail::require_positive(up_to);
    std::vector<std::uint64_t> starts{1, 2, 3};
    for (unsigned k = 2; k < 64; ++k) {
        starts.push_back(std::uint64_t{1} << k);
        starts.push_back((std::uint64_t{1} << k) + 1);
    }
    std::erase_if(starts, [&](std::uint64_t s) { return s > up_to; });

    std::vector<LengthRun> runs;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const std::uint64_t first = starts[k];
        const std::uint64_t last = k + 1 < starts.size() ? starts[k + 1] - 1 : up_to;
        const std::uint32_t len = c.length_fn(first);
        if (!runs.empty() && runs.back().length == len) {
            runs.back().last = last;
        } else {
            runs.push_back({first, last, len});
        }
    }
    return runs;
}

// ---------------------------------------------------------------------------
// Kraft sums.

/// numerator / 2^62.
struct DyadicSum {
    static constexpr unsigned exponent = 62;
    std::uint64_t numerator = 0;

    [[nodiscard]] double value() const { return std::ldexp(static_cast<double>(numerator), -static_cast<int>(exponent)); }
    [[nodiscard]] bool at_most_one() const noexcept { return numerator <= (std::uint64_t{1} << exponent); }
    friend auto operator<=>(const DyadicSum&, const DyadicSum&) = default;
};

/// Exact sum of 2^-L(n) for n = 1 .. limit.
inline DyadicSum kraft_partial_sum(const UciCode& c, std::uint64_t limit) {
    detail::require_positive(limit);
    if (c.length_fn(limit) > DyadicSum::exponent) {
        throw InvalidArgument("codeword length at n = " + std::to_string(limit) +
                              " exceeds the 62-bit Kraft accumulator");
    }
    DyadicSum sum;
    for (const auto& run : length_runs(c, limit)) {
        const std::uint64_t count = run.last - run.first + 1;
        sum.numerator += count << (DyadicSum::exponent - run.length);
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Bound verification.

enum class BoundForm { linear, doubling, floor, per_code };

struct BoundCheck {
    bool pass = true;
    std::optional<std::uint64_t> counterexample;
    std::uint64_t checked = 0;
};

/// Checks L(n) <= bound(n) for all 1 <= n <= limit.
inline BoundCheck verify_length_bound(const UciCode& c, const LogLinearBound& bound, std::uint64_t limit) {
    BoundCheck result;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        ++result.checked;
        if (!bound.holds(c.length_fn(n), n)) {
            result.pass = false;
            result.counterexample = n;
            break;
        }
    }
    return result;
}

/// Checks L(n) <= bound(n) for all 2 <= n <= limit.
inline BoundCheck verify_length_bound(const UciCode& c, const FloorBound& bound, std::uint64_t limit) {
    BoundCheck result;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        ++result.checked;
        if (!bound.holds(c.length_fn(n), n)) {
            result.pass = false;
            result.counterexample = n;
            break;
        }
    }
    return result;
}

/// Checks the code's own stored constants. `per_code` is an alias of the doubling
/// bound.
inline BoundCheck verify_length_bound(const UciCode& c, BoundForm form, std::uint64_t limit) {
    switch (form) {
        case BoundForm::linear: return verify_length_bound(c, c.linear, limit);
        case BoundForm::doubling:
        case BoundForm::per_code: return verify_length_bound(c, c.doubling, limit);
        case BoundForm::floor: return verify_length_bound(c, c.floor, limit);
    }
    throw InvalidArgument("unknown bound form");
}

/// First n <= limit with L(n) > L(n + 1), if any.
inline std::optional<std::uint64_t> find_monotonicity_violation(const UciCode& c, std::uint64_t limit) {
    for (std::uint64_t n = 1; n < limit; ++n) {
        if (c.length_fn(n) > c.length_fn(n + 1)) {
            return n;
        }
    }
    return std::nullopt;
}

}  // namespace guci
