#pragma once

// Decreasing probability distributions over the non-negative integers and the
// analytic measures of the run-length/UCI construction: entropy, expected UCI
// length, coding rate, the rate gap and its P(0) threshold.
//
// Infinite series over run lengths are summed block-wise over the maximal
// intervals where the length function is constant (see length_runs), so every
// block is a closed-form geometric sum. What remains past the last block is
// bounded by the majorant sum x^(m-1) (a + b m), from L(m) <= a + b log2 m.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guci/codes.hpp"
#include "guci/error.hpp"

namespace guci {

inline constexpr double normalization_tolerance = 1e-12;

class Dpd {
public:
    enum class Kind { explicit_probs, geometric, zipf };

    /// Validates a finite decreasing distribution. Monotonicity is checked
    /// exactly and the total within 1e-12; inputs are never renormalized.
    static Dpd from_probabilities(std::vector<double> probs) {
        if (probs.empty()) {
            throw InvalidDistribution("no probabilities");
        }
        long double total = 0;
        for (std::size_t n = 0; n < probs.size(); ++n) {
            const double p = probs[n];
            if (!std::isfinite(p) || p < 0) {
                throw InvalidDistribution("P(" + std::to_string(n) + ") is not a finite non-negative number");
            }
            if (n > 0 && p > probs[n - 1]) {
                throw InvalidDistribution("not decreasing: P(" + std::to_string(n) + ") > P(" +
                                          std::to_string(n - 1) + ")");
            }
            total += p;
        }
        if (std::fabs(static_cast<double>(total - 1.0L)) > normalization_tolerance) {
            throw InvalidDistribution("probabilities sum to " + std::to_string(static_cast<double>(total)));
        }
        while (probs.size() > 1 && probs.back() == 0.0) {
            probs.pop_back();
        }
        Dpd d;
        d.kind_ = Kind::explicit_probs;
        d.probs_ = std::move(probs);
        d.finish_finite();
        return d;
    }

    /// P(n) = (1 - q) q^n.
    static Dpd geometric(double q) {
        if (!(q > 0 && q < 1)) {
            throw InvalidDistribution("geometric ratio must lie in (0, 1)");
        }
        return geometric_complement(1 - q, q);
    }

    /// Geometric source given by 1 - q, for ratios too close to one to
    /// round-trip through a double q.
    static Dpd geometric_from_complement(double one_minus_q) {
        if (!(one_minus_q > 0 && one_minus_q < 1)) {
            throw InvalidDistribution("geometric complement must lie in (0, 1)");
        }
        return geometric_complement(one_minus_q, 1 - one_minus_q);
    }

    /// P(n) proportional to (n + 1)^-s for 0 <= n < support.
    static Dpd zipf(double s, std::uint64_t support) {
        if (!(s > 1) || !std::isfinite(s)) {
            throw InvalidDistribution("zipf exponent must exceed 1");
        }
        if (support == 0 || support > (std::uint64_t{1} << 26)) {
            throw InvalidDistribution("zipf support must lie in [1, 2^26]");
        }
        std::vector<double> w(support);
        long double total = 0;
        for (std::uint64_t n = 0; n < support; ++n) {
            w[n] = std::pow(static_cast<double>(n + 1), -s);
            total += w[n];
        }
        for (double& p : w) {
            p = static_cast<double>(p / total);
        }
        Dpd d;
        d.kind_ = Kind::zipf;
        d.param_ = s;
        d.probs_ = std::move(w);
        d.finish_finite();
        return d;
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] bool finite() const noexcept { return kind_ != Kind::geometric; }

    [[nodiscard]] double p0() const noexcept { return finite() ? probs_[0] : param_; }

    /// 1 - P(0), computed from the tail mass so it stays accurate when P(0) is near one.
    [[nodiscard]] double one_minus_p0() const noexcept { return finite() ? tail_mass_ : ratio_; }

    [[nodiscard]] double prob(std::uint64_t n) const {
        if (finite()) {
            return n < probs_.size() ? probs_[n] : 0.0;
        }
        return param_ * std::exp(static_cast<double>(n) * log_ratio());
    }

    /// Probabilities of a finite distribution, trailing zeros trimmed.
    [[nodiscard]] std::span<const double> probabilities() const {
        if (!finite()) {
            throw InvalidArgument("geometric distributions have infinite support");
        }
        return probs_;
    }

    /// Geometric ratio q and its complement 1 - q.
    [[nodiscard]] double ratio() const { return kind_ == Kind::geometric ? ratio_ : 0.0; }
    [[nodiscard]] double ratio_complement() const { return kind_ == Kind::geometric ? param_ : 1.0; }
    /// ln q for geometric sources.
    [[nodiscard]] double log_ratio() const { return std::log1p(-param_); }

    [[nodiscard]] double zipf_exponent() const { return kind_ == Kind::zipf ? param_ : 0.0; }

    [[nodiscard]] std::string describe() const {
        switch (kind_) {
            case Kind::geometric: return "geom:q=" + format_double(ratio_);
            case Kind::zipf: return "zipf:s=" + format_double(param_) + ",n=" + std::to_string(probs_.size());
            case Kind::explicit_probs: break;
        }
        return "explicit(" + std::to_string(probs_.size()) + " values)";
    }

private:
    static Dpd geometric_complement(double one_minus_q, double q) {
        Dpd d;
        d.kind_ = Kind::geometric;
        d.param_ = one_minus_q;
        d.ratio_ = q;
        return d;
    }

    static std::string format_double(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    void finish_finite() {
        long double tail = 0;
        for (std::size_t n = probs_.size(); n-- > 1;) {
            tail += probs_[n];
        }
        tail_mass_ = static_cast<double>(tail);
    }

    Kind kind_ = Kind::explicit_probs;
    std::vector<double> probs_;
    // Geometric: 1 - q. Zipf: exponent.
    double param_ = 0;
    double ratio_ = 0;
    double tail_mass_ = 0;
};

// ---------------------------------------------------------------------------
// Entropy.

/// Shannon entropy in bits, with 0 log 0 = 0.
inline double entropy(const Dpd& p) {
    if (!p.finite()) {
        // h(q) / (1 - q) with q = 1 - t.
        const double t = p.ratio_complement();
        const double q_ln_q = (1 - t) * std::log1p(-t);
        return (-q_ln_q / std::numbers::ln2 - t * std::log2(t)) / t;
    }
    long double h = 0;
    for (double x : p.probabilities()) {
        if (x > 0) {
            h -= static_cast<long double>(x) * std::log2(static_cast<long double>(x));
        }
    }
    return static_cast<double>(h);
}

// ---------------------------------------------------------------------------
// Run-length series.

struct SeriesValue {
    double value = 0;
    /// Certified bound on the omitted remainder.
    double tail_bound = 0;
    /// Number of closed-form blocks summed.
    std::size_t terms_used = 0;
};

/// Sum over i >= 0 of x^i L(i + 1), where `one_minus_x` = 1 - x is passed
/// separately so x can sit arbitrarily close to one.
inline SeriesValue run_length_series(const UciCode& c, double x, double one_minus_x) {
    if (!(one_minus_x > 0) || one_minus_x > 1) {
        throw InvalidArgument("run-length series needs 0 <= x < 1");
    }
    SeriesValue out;
    if (x == 0 || one_minus_x == 1) {
        out.value = c.length_fn(1);
        out.terms_used = 1;
        return out;
    }
    const double log_x = std::log1p(-one_minus_x);
    long double sum = 0;
    std::uint64_t summed_through = 0;
    for (const auto& run : length_runs(c)) {
        const double start = std::exp(static_cast<double>(run.first - 1) * log_x);
        if (start == 0) {
            break;
        }
        const double span = static_cast<double>(run.last - run.first + 1);
        const double block = start * -std::expm1(span * log_x) / one_minus_x;
        sum += static_cast<long double>(run.length) * block;
        summed_through = run.last;
        ++out.terms_used;
    }
    out.value = static_cast<double>(sum);

    // Remainder over m > M of x^(m-1) (a + b m).
    const double m = static_cast<double>(summed_through);
    const double x_m = std::exp(m * log_x);
    const double a = c.linear.offset();
    const double b = c.linear.slope();
    out.tail_bound = x_m * (a / one_minus_x + b * ((m + 1) * one_minus_x + x) / (one_minus_x * one_minus_x));
    if (out.tail_bound > 1e-10) {
        throw SeriesBudgetExceeded("run-length series tail bound " + std::to_string(out.tail_bound));
    }
    return out;
}

/// Sum over n >= 1 of q^(2^n - 1).
inline double gamma_power_series(double q, double one_minus_q) {
    if (q == 0) {
        return 0;
    }
    if (!(one_minus_q > 0)) {
        throw InvalidArgument("gamma power series needs q < 1");
    }
    const double log_q = std::log1p(-one_minus_q);
    long double sum = 0;
    for (int n = 1; n < 64; ++n) {
        const double term = std::exp(std::ldexp(1.0, n) * log_q - log_q);
        sum += term;
        if (term < 1e-16 * static_cast<double>(sum) || term == 0) {
            break;
        }
    }
    return static_cast<double>(sum);
}

/// Sum over i >= 1 of q^i floor(log2(i + 1)), via its dyadic regrouping
/// (1 / (1 - q)) sum over n >= 1 of q^(2^n - 1).
inline double gamma_run_series(double q, double one_minus_q) {
    if (q < 0 || !(one_minus_q > 0)) {
        throw InvalidArgument("gamma run series needs 0 <= q < 1");
    }
    return gamma_power_series(q, one_minus_q) / one_minus_q;
}

inline double gamma_run_series(double q) { return gamma_run_series(q, 1 - q); }

// ---------------------------------------------------------------------------
// Expected lengths and rates.

namespace detail {

inline void require_rle_source(const Dpd& p) {
    if (!(p.one_minus_p0() > 0)) {
        throw InvalidDistribution("P(0) = 1: zero runs never terminate");
    }
}

/// Sum over n >= 1 of q^n L(n) for a geometric ratio q.
inline double geometric_length_moment(const UciCode& c, const Dpd& p) {
    return p.ratio() * run_length_series(c, p.ratio(), p.ratio_complement()).value;
}

}  // namespace detail

/// E_P(L) = sum over n >= 0 of P(n) L(n + 1): the per-symbol baseline.
inline double expected_uci_length(const Dpd& p, const UciCode& c) {
    if (!p.finite()) {
        return p.ratio_complement() * run_length_series(c, p.ratio(), p.ratio_complement()).value;
    }
    long double e = 0;
    const auto probs = p.probabilities();
    for (std::size_t n = 0; n < probs.size(); ++n) {
        e += static_cast<long double>(probs[n]) * c.length_fn(n + 1);
    }
    return static_cast<double>(e);
}

/// Sum over n >= 1 of P(n) L(n).
inline double terminator_length(const Dpd& p, const UciCode& c) {
    if (!p.finite()) {
        return p.ratio_complement() * detail::geometric_length_moment(c, p);
    }
    long double e = 0;
    const auto probs = p.probabilities();
    for (std::size_t n = 1; n < probs.size(); ++n) {
        e += static_cast<long double>(probs[n]) * c.length_fn(n);
    }
    return static_cast<double>(e);
}

/// Sum over n >= 1 of P(n) (L(n + 1) - L(n)). Jumps happen only at the last
/// index of each constant-length run.
inline double jump_sum(const Dpd& p, const UciCode& c) {
    long double s = 0;
    if (p.finite()) {
        const auto probs = p.probabilities();
        for (std::size_t n = 1; n < probs.size(); ++n) {
            const auto jump = static_cast<std::int64_t>(c.length_fn(n + 1)) - c.length_fn(n);
            s += static_cast<long double>(probs[n]) * static_cast<long double>(jump);
        }
        return static_cast<double>(s);
    }
    const auto runs = length_runs(c);
    for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
        const double pn = p.prob(runs[k].last);
        if (pn == 0) {
            break;
        }
        s += static_cast<long double>(pn) *
             (static_cast<long double>(runs[k + 1].length) - static_cast<long double>(runs[k].length));
    }
    return static_cast<double>(s);
}

/// Mean source symbols per dictionary word: 1 / (1 - P(0)).
inline double dict_mean_length(const Dpd& p) {
    detail::require_rle_source(p);
    return 1 / p.one_minus_p0();
}

struct RateValue {
    double value = 0;
    double tail_bound = 0;
    std::size_t terms_used = 0;
};

/// Coding rate (1 - P(0))^2 sum_i P(0)^i L(i + 1) + sum_{n >= 1} P(n) L(n).
inline RateValue coding_rate_detail(const Dpd& p, const UciCode& c) {
    detail::require_rle_source(p);
    const double w = p.one_minus_p0();
    const auto runs = run_length_series(c, p.p0(), w);
    RateValue out;
    out.value = w * w * runs.value + terminator_length(p, c);
    out.tail_bound = w * w * runs.tail_bound;
    out.terms_used = runs.terms_used;
    return out;
}

inline double coding_rate(const Dpd& p, const UciCode& c) { return coding_rate_detail(p, c).value; }

/// Gamma coding rate through the dyadic regrouping:
/// (1 - P(0)) (1 + 2 sum_n P(0)^(2^n - 1)) + sum_{n >= 1} P(n) L(n).
inline double coding_rate_gamma_closed(const Dpd& p) {
    detail::require_rle_source(p);
    const double w = p.one_minus_p0();
    return w * (1 + 2 * gamma_power_series(p.p0(), w)) + terminator_length(p, code(CodeId::gamma));
}

/// Delta = R_C - E_P(L).
inline double delta_gap(const Dpd& p, const UciCode& c) { return coding_rate(p, c) - expected_uci_length(p, c); }

/// Delta through its jump-value expansion
/// (1 - P(0))^2 sum_i P(0)^i L(i + 1) - P(0) L(1) - sum_{n >= 1} P(n) (L(n + 1) - L(n)).
inline double delta_gap_expanded(const Dpd& p, const UciCode& c) {
    detail::require_rle_source(p);
    const double w = p.one_minus_p0();
    const double series = run_length_series(c, p.p0(), w).value;
    return w * w * series - p.p0() * c.length_fn(1) - jump_sum(p, c);
}

/// Sum over t >= 1 of P(2^t - 1).
inline double dyadic_tail_mass(const Dpd& p) {
    if (!p.finite()) {
        return p.ratio_complement() * gamma_power_series(p.ratio(), p.ratio_complement());
    }
    const auto probs = p.probabilities();
    long double s = 0;
    for (std::uint64_t n = 1; n < probs.size(); n = 2 * n + 1) {
        s += probs[n];
    }
    return static_cast<double>(s);
}

/// Gamma rate gap in closed form:
/// 1 - 2 P(0) + 2 (1 - P(0)) sum_n P(0)^(2^n - 1) - 2 sum_t P(2^t - 1).
/// P(0) = 1 is allowed; the series term then vanishes.
inline double delta_gap_gamma_closed(const Dpd& p) {
    const double w = p.one_minus_p0();
    const double series = w > 0 ? w * gamma_power_series(p.p0(), w) : 0.0;
    return 1 - 2 * p.p0() + 2 * series - 2 * dyadic_tail_mass(p);
}

// ---------------------------------------------------------------------------
// Dictionary entropy.

/// H(D_RLE) through conservation: H(P) / (1 - P(0)).
inline double dict_entropy(const Dpd& p) {
    detail::require_rle_source(p);
    const double h = entropy(p);
    if (!(h > 0)) {
        throw InvalidDistribution("zero entropy");
    }
    return h / p.one_minus_p0();
}

struct DirectSum {
    double value = 0;
    std::uint64_t terms = 0;
};

/// -sum over words 0^i n of P(0)^i P(n) log2(P(0)^i P(n)), summed term by
/// term over (i, n). Stops each inner sum once the remainder is below
/// 1e-20; throws past `max_terms` pairs.
inline DirectSum dict_entropy_direct(const Dpd& p, std::uint64_t max_terms = 500'000'000) {
    detail::require_rle_source(p);
    const long double p0 = p.p0();
    const long double log_p0 = p0 > 0 ? std::log2(p0) : 0.0L;

    std::uint64_t support = 0;
    if (p.finite()) {
        support = p.probabilities().size();
    } else {
        // Drop n once the remaining mass times its largest surprisal is negligible.
        const double log2_q = p.log_ratio() / std::numbers::ln2;
        support = 1;
        while (true) {
            const double n = static_cast<double>(support);
            const double mass = std::exp(n * p.log_ratio());
            const double surprisal = -std::log2(p.ratio_complement()) - n * log2_q;
            if (mass * (surprisal + 1 / p.ratio_complement()) < 1e-20) {
                break;
            }
            ++support;
        }
    }

    DirectSum out;
    long double total = 0;
    for (std::uint64_t n = 1; n < support; ++n) {
        const long double pn = p.prob(n);
        if (pn <= 0) {
            continue;
        }
        const long double log_pn = std::log2(pn);
        long double weight = pn;
        for (std::uint64_t i = 0;; ++i) {
            const long double log_w = static_cast<long double>(i) * log_p0 + log_pn;
            total -= weight * log_w;
            if (++out.terms > max_terms) {
                throw SeriesBudgetExceeded("direct dictionary entropy needs more than " +
                                           std::to_string(max_terms) + " terms");
            }
            if (p0 == 0) {
                break;
            }
            weight *= p0;
            // Remainder over i' > i of P(0)^i' P(n) (i' |log P(0)| + |log P(n)|).
            const long double w = 1 - p0;
            const long double rest = weight / w * (-log_w - log_p0 - log_p0 * p0 / w);
            if (rest < 1e-20L || weight == 0) {
                break;
            }
        }
    }
    out.value = static_cast<double>(total);
    return out;
}

// ---------------------------------------------------------------------------
// Rate-gap threshold.

/// Coefficients (L(1), a, b) of a minimal code with L(n) <= a + b floor(log2 n) for n >= 2.
struct ThresholdTriple {
    double first_length;
    double a;
    double b;

    static ThresholdTriple of(const UciCode& c) {
        return {static_cast<double>(c.length_fn(1)), c.floor.a.value(), c.floor.b.value()};
    }
};

/// L(1)(t + 1/t - 3) + a(1 - t) + b(1 - t)(1 + t^2 + t^6 / (1 - t^8)).
/// Delta < 0 for every source with P(0) >= t whenever this is <= 0.
inline double threshold_margin(const ThresholdTriple& c, double t) {
    if (!(t > 0 && t < 1)) {
        throw InvalidArgument("threshold argument must lie in (0, 1)");
    }
    const double t2 = t * t;
    const double t6 = t2 * t2 * t2;
    const double t8 = t6 * t2;
    return c.first_length * (t + 1 / t - 3) + c.a * (1 - t) + c.b * (1 - t) * (1 + t2 + t6 / (1 - t8));
}

/// Smallest t with h(t) <= 0: first hit on a 1e-4 grid, refined by bisection
/// to 1e-9. The returned point always satisfies h(t) <= 0.
inline double rate_gap_threshold(const ThresholdTriple& c) {
    constexpr int grid = 10'000;
    for (int k = 1; k < grid; ++k) {
        const double t = k / static_cast<double>(grid);
        if (threshold_margin(c, t) <= 0) {
            double lo = (k - 1) / static_cast<double>(grid);
            double hi = t;
            if (lo == 0) {
                return hi;
            }
            while (hi - lo > 1e-9) {
                const double mid = 0.5 * (lo + hi);
                (threshold_margin(c, mid) <= 0 ? hi : lo) = mid;
            }
            return hi;
        }
    }
    throw NoThreshold("no t in (0, 1) with nonpositive threshold function");
}

// ---------------------------------------------------------------------------
// Reports.

struct AnalysisReport {
    double entropy_bits = 0;
    double expected_uci_bits = 0;
    double coding_rate_bits = 0;
    double delta_bits = 0;
    /// E / max(1, H).
    double ratio_uci = 0;
    /// E / H.
    double ratio_uci_pure = 0;
    /// R_C / H.
    double ratio_guci = 0;
    double tail_bound = 0;
    std::size_t terms_used = 0;
};

inline AnalysisReport expansion_ratios(const Dpd& p, const UciCode& c) {
    AnalysisReport r;
    r.entropy_bits = entropy(p);
    if (!(r.entropy_bits > 0)) {
        throw InvalidDistribution("zero entropy");
    }
    const auto rate = coding_rate_detail(p, c);
    r.expected_uci_bits = expected_uci_length(p, c);
    r.coding_rate_bits = rate.value;
    r.delta_bits = rate.value - r.expected_uci_bits;
    r.ratio_uci = r.expected_uci_bits / std::max(1.0, r.entropy_bits);
    r.ratio_uci_pure = r.expected_uci_bits / r.entropy_bits;
    r.ratio_guci = r.coding_rate_bits / r.entropy_bits;
    r.tail_bound = rate.tail_bound;
    r.terms_used = rate.terms_used;
    return r;
}

// ---------------------------------------------------------------------------
// Distribution families.

/// Uniform (0, 1) draw from 53 random bits; never returns 0.
template <typename Rng>
double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Normalizes positive weights sorted into decreasing order.
inline Dpd normalized_decreasing(std::vector<double> w) {
    std::sort(w.begin(), w.end(), std::greater<>());
    const long double total = std::accumulate(w.begin(), w.end(), 0.0L);
    for (double& x : w) {
        x = static_cast<double>(x / total);
    }
    return Dpd::from_probabilities(std::move(w));
}

/// Uniform draw from the simplex over a random support of 2 .. max_support
/// values, sorted into decreasing order.
template <typename Rng>
Dpd random_dpd(Rng& rng, std::size_t max_support = 512) {
    const std::size_t support = 2 + static_cast<std::size_t>(uniform_open(rng) * static_cast<double>(max_support - 1));
    std::vector<double> w(std::min(support, max_support));
    for (double& x : w) {
        x = -std::log(uniform_open(rng));
    }
    return normalized_decreasing(std::move(w));
}

/// P(0) = p0 followed by `tail` scaled to mass 1 - p0. `tail` must be
/// decreasing, positive and no larger than p0 after scaling.
inline Dpd with_tail(double p0, std::span<const double> tail) {
    const long double total = std::accumulate(tail.begin(), tail.end(), 0.0L);
    const long double mass = 1.0L - static_cast<long double>(p0);
    std::vector<double> probs{p0};
    for (double t : tail) {
        probs.push_back(static_cast<double>(t / total * mass));
    }
    return Dpd::from_probabilities(std::move(probs));
}

/// P(0) = p0, then a geometric tail P(n) proportional to r^(n-1), cut once
/// the remaining tail mass drops below 1e-18 of the total.
inline Dpd with_geometric_tail(double p0, double r) {
    std::vector<double> tail{1.0};
    while (tail.back() * r / (1 - r) > 1e-18 && tail.size() < 100'000) {
        tail.push_back(tail.back() * r);
    }
    return with_tail(p0, tail);
}

/// P(0) = p0, then P(n) proportional to n^-s for 1 <= n <= length.
inline Dpd with_zeta_tail(double p0, double s, std::size_t length) {
    std::vector<double> tail(length);
    for (std::size_t n = 0; n < length; ++n) {
        tail[n] = std::pow(static_cast<double>(n + 1), -s);
    }
    return with_tail(p0, tail);
}

}  // namespace guci
