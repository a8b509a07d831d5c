#pragma once

// Stream sampling, empirical rates and the experiment runners behind
// `guci verify`. Every result is a pure function of (suite, trials, seed)
// apart from runtime_ms; trial k draws from the sub-seed derive_seed(seed, k).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "guci/codes.hpp"
#include "guci/container.hpp"
#include "guci/dist.hpp"
#include "guci/error.hpp"

namespace guci {

/// splitmix64 finalizer applied to seed + (index + 1) * golden gamma.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Sampling.

/// Mass beyond which parametric tails are cut when sampling.
inline constexpr double sampling_tail_cut = 1e-15;

/// `count` i.i.d. draws by inverse CDF. Geometric draws are capped at the
/// first n whose tail mass q^n falls below 1e-15.
inline std::vector<std::uint64_t> sample_stream(const Dpd& p, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> out(count);
    if (!p.finite()) {
        const double log_q = p.log_ratio();
        const double cap = std::ceil(std::log(sampling_tail_cut) / log_q);
        for (auto& s : out) {
            const double n = std::floor(std::log(uniform_open(rng)) / log_q);
            s = static_cast<std::uint64_t>(std::min(n, cap));
        }
        return out;
    }
    const auto probs = p.probabilities();
    std::vector<double> cdf(probs.size());
    long double acc = 0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        acc += probs[n];
        cdf[n] = static_cast<double>(acc);
    }
    cdf.back() = 1.0;
    for (auto& s : out) {
        const double u = uniform_open(rng);
        s = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        // Skip zero-probability symbols that share a CDF value.
        while (probs[s] == 0) {
            ++s;
        }
    }
    return out;
}

/// Payload bits per source symbol.
inline double empirical_rate(std::span<const std::uint64_t> symbols, const UciCode& c, Mode mode) {
    if (symbols.empty()) {
        throw InvalidArgument("empirical rate of an empty stream");
    }
    const auto stream = encode(symbols, c, mode);
    return static_cast<double>(stream.payload.bit_length()) / static_cast<double>(symbols.size());
}

struct RateEstimate {
    double rate = 0;
    /// Standard error of `rate`.
    double std_error = 0;
};

/// Empirical rate with its standard error. In uci mode each symbol is an
/// independent cost; in guci mode the rate is a ratio of word bits to word
/// lengths and the error comes from the delta method over words.
inline RateEstimate empirical_rate_estimate(std::span<const std::uint64_t> symbols, const UciCode& c, Mode mode) {
    RateEstimate est;
    est.rate = empirical_rate(symbols, c, mode);
    const double count = static_cast<double>(symbols.size());
    long double acc = 0;
    if (mode == Mode::uci) {
        for (std::uint64_t s : symbols) {
            const double d = c.length_of(s + 1) - est.rate;
            acc += d * d;
        }
        est.std_error = std::sqrt(static_cast<double>(acc) / (count - 1)) / std::sqrt(count);
        return est;
    }
    const auto parse = parse_runs(symbols);
    for (const auto& t : parse.tokens) {
        const double bits = c.length_of(t.zeros + 1) + c.length_of(t.terminator);
        const double d = bits - est.rate * static_cast<double>(t.zeros + 1);
        acc += d * d;
    }
    est.std_error = std::sqrt(static_cast<double>(acc)) / count;
    return est;
}

// ---------------------------------------------------------------------------
// Results.

struct ExperimentResult {
    std::string name;
    bool pass = false;
    double observed = 0;
    double expected = 0;
    double tolerance = 0;
    std::uint64_t seed = 0;
    double runtime_ms = 0;
    /// First counterexample or other context; empty when nothing to add.
    std::string detail;
};

namespace detail {

class Stopwatch {
public:
    [[nodiscard]] double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Tracks the extreme value of a per-case quantity and the case that set it.
struct Extreme {
    double value;
    std::string where;

    void max_with(double v, const std::string& label) {
        if (v > value) {
            value = v;
            where = label;
        }
    }
    void min_with(double v, const std::string& label) {
        if (v < value) {
            value = v;
            where = label;
        }
    }
};

inline const std::array<CodeId, 3> codec_ids{CodeId::gamma, CodeId::delta, CodeId::omega};

}  // namespace detail

// ---------------------------------------------------------------------------
// Corpora.

struct LabeledDpd {
    std::string label;
    Dpd dist;
};

/// `trials` uniform-simplex DPDs of support 2..512.
inline std::vector<LabeledDpd> random_corpus(std::size_t trials, std::uint64_t seed) {
    std::vector<LabeledDpd> out;
    out.reserve(trials);
    for (std::size_t k = 0; k < trials; ++k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        out.push_back({"random#" + std::to_string(k), random_dpd(rng)});
    }
    return out;
}

/// Near-degenerate and heavy-P(0) sources: P(0) in {0.5, 0.9, 0.99, 1 - 1e-6}
/// with geometric and zeta tails, single-tail sources and geometric sources.
inline std::vector<LabeledDpd> adversarial_corpus() {
    std::vector<LabeledDpd> out;
    for (double p0 : {0.5, 0.9, 0.99, 1 - 1e-6}) {
        const std::string head = "p0=" + detail::fmt(p0);
        for (double r : {0.1, 0.5, 0.9, 0.99}) {
            out.push_back({head + ",geom_tail=" + detail::fmt(r), with_geometric_tail(p0, r)});
        }
        for (double s : {1.1, 2.0, 3.0}) {
            out.push_back({head + ",zeta_tail=" + detail::fmt(s), with_zeta_tail(p0, s, 4096)});
        }
    }
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8, 1e-10}) {
        out.push_back({"single_tail,eps=" + detail::fmt(eps), Dpd::from_probabilities({1 - eps, eps})});
    }
    for (double t : {0.5, 0.25, 0.1, 1e-2, 1e-3, 1e-4, 1e-6}) {
        out.push_back({"geom,1-q=" + detail::fmt(t), Dpd::geometric_from_complement(t)});
    }
    for (double t : {0.6, 0.9, 0.99, 0.999, 1 - 1e-6}) {
        out.push_back({"geom,q=" + detail::fmt(1 - t), Dpd::geometric(1 - t)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rate suites.

namespace detail {

/// One result per code: max over the corpus of ratio_guci against `limit(c)`.
inline std::vector<ExperimentResult> ratio_suite(std::string_view prefix, std::span<const LabeledDpd> corpus,
                                                 double (UciCode::*limit)() const, std::uint64_t seed) {
    std::vector<ExperimentResult> out;
    for (const auto& c : all_codes()) {
        Stopwatch sw;
        Extreme worst{0, ""};
        for (const auto& d : corpus) {
            worst.max_with(expansion_ratios(d.dist, c).ratio_guci, d.label);
        }
        ExperimentResult r;
        r.name = std::string(prefix) + "." + std::string(c.name);
        r.observed = worst.value;
        r.expected = (c.*limit)();
        r.tolerance = 1e-9;
        r.pass = r.observed <= r.expected + r.tolerance;
        r.seed = seed;
        r.detail = "max at " + worst.where;
        r.runtime_ms = sw.elapsed_ms();
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<ExperimentResult> thm1_suite(std::span<const LabeledDpd> corpus, std::uint64_t seed) {
    std::vector<ExperimentResult> out;
    for (CodeId id : codec_ids) {
        const UciCode& c = code(id);
        Stopwatch sw;
        Extreme margin{std::numeric_limits<double>::infinity(), ""};
        for (const auto& d : corpus) {
            margin.min_with(coding_rate(d.dist, c) - entropy(d.dist), d.label);
        }
        out.push_back({"thm1." + std::string(c.name), margin.value >= -1e-9, margin.value, 0.0, 1e-9, seed,
                       sw.elapsed_ms(), "min R_C - H at " + margin.where});
    }
    return out;
}

/// Random decreasing tail of mass 1 - p0 after P(0) = p0.
template <typename Rng>
Dpd random_tail_dpd(Rng& rng, double p0) {
    const Dpd shape = random_dpd(rng);
    return with_tail(p0, shape.probabilities());
}

inline std::vector<ExperimentResult> thm6_suite(std::size_t trials, std::uint64_t seed) {
    std::vector<ExperimentResult> out;

    const ThresholdTriple gamma_triple{1, 1, 2};
    const ThresholdTriple iota_triple{1, 2.5, 1.5};
    out.push_back({"thm6.h_gamma_0.81", threshold_margin(gamma_triple, 0.81) < 0, threshold_margin(gamma_triple, 0.81), 0.0, 0.0,
                   seed, 0.0, ""});
    out.push_back({"thm6.h_iota_0.83", threshold_margin(iota_triple, 0.83) < 0, threshold_margin(iota_triple, 0.83), 0.0, 0.0,
                   seed, 0.0, ""});

    for (const auto& c : all_codes()) {
        Stopwatch sw;
        const auto triple = ThresholdTriple::of(c);
        double t_star = 0;
        try {
            t_star = rate_gap_threshold(triple);
        } catch (const NoThreshold&) {
            out.push_back({"thm6." + std::string(c.name), true, 0.0, 0.0, 0.0, seed, sw.elapsed_ms(),
                           "no threshold for this code's floor bound; nothing to check"});
            continue;
        }
        Extreme worst{-std::numeric_limits<double>::infinity(), ""};
        for (std::size_t k = 0; k < trials; ++k) {
            std::mt19937_64 rng(derive_seed(seed, k));
            const double p0 = t_star + (0.999 - t_star) * uniform_open(rng);
            const Dpd d = random_tail_dpd(rng, p0);
            worst.max_with(delta_gap(d, c), "trial " + std::to_string(k) + ", P(0)=" + fmt(p0));
        }
        out.push_back({"thm6." + std::string(c.name), worst.value < 0, worst.value, 0.0, 0.0, seed, sw.elapsed_ms(),
                       "t*=" + fmt(t_star) + ", max delta at " + worst.where});
    }
    return out;
}

inline std::vector<ExperimentResult> lemmas_suite(std::span<const LabeledDpd> corpus, std::uint64_t seed) {
    std::vector<ExperimentResult> out;

    {
        // -log2(P(0)^i P(n)) >= 1 + log2 n + log2(i + 1) for i >= 1.
        Stopwatch sw;
        Extreme slack{std::numeric_limits<double>::infinity(), ""};
        for (const auto& d : corpus) {
            const auto probs = d.dist.probabilities();
            const double log_p0 = std::log2(probs[0]);
            for (std::size_t n = 1; n < probs.size(); ++n) {
                if (probs[n] == 0) {
                    continue;
                }
                const double log_pn = std::log2(probs[n]);
                for (int i = 1; i <= 100; ++i) {
                    const double lhs = -(i * log_p0 + log_pn);
                    const double rhs = 1 + std::log2(static_cast<double>(n)) + std::log2(i + 1.0);
                    slack.min_with(lhs - rhs, d.label + ", i=" + std::to_string(i) + ", n=" + std::to_string(n));
                }
            }
        }
        out.push_back({"lemmas.word_surprisal", slack.value >= -1e-9, slack.value, 0.0, 1e-9, seed, sw.elapsed_ms(),
                       "min slack at " + slack.where});
    }
    {
        // 2^m m! (m + 1)^-m <= 1.
        Stopwatch sw;
        Extreme worst{-std::numeric_limits<double>::infinity(), ""};
        for (int m = 1; m <= 170; ++m) {
            const double log_a = m * std::log(2.0) + std::lgamma(m + 1.0) - m * std::log(m + 1.0);
            worst.max_with(log_a, "m=" + std::to_string(m));
        }
        out.push_back({"lemmas.factorial_product", worst.value <= 1e-12, std::exp(worst.value), 1.0, 1e-12, seed,
                       sw.elapsed_ms(), "max at " + worst.where});
    }
    {
        // Partial sums of P(j)(1 + log2 j + log2 P(j)) stay <= 0.
        Stopwatch sw;
        Extreme worst{-std::numeric_limits<double>::infinity(), ""};
        for (const auto& d : corpus) {
            const auto probs = d.dist.probabilities();
            long double s = 0;
            for (std::size_t j = 1; j < probs.size(); ++j) {
                if (probs[j] > 0) {
                    s += probs[j] * (1 + std::log2(static_cast<long double>(j)) + std::log2(probs[j]));
                }
                worst.max_with(static_cast<double>(s), d.label + ", m=" + std::to_string(j));
            }
        }
        out.push_back({"lemmas.partial_sums", worst.value <= 1e-9, worst.value, 0.0, 1e-9, seed, sw.elapsed_ms(),
                       "max at " + worst.where});
    }
    {
        // L_gamma(n + 1) - L_gamma(n) is 2 when n + 1 is a power of two, else 0.
        Stopwatch sw;
        std::string bad;
        for (std::uint64_t n = 1; n <= (1u << 20) && bad.empty(); ++n) {
            const auto jump = lengths::gamma(n + 1) - lengths::gamma(n);
            const bool power = ((n + 1) & n) == 0;
            if (jump != (power ? 2u : 0u)) {
                bad = "n=" + std::to_string(n);
            }
        }
        out.push_back({"lemmas.gamma_jumps", bad.empty(), bad.empty() ? 0.0 : 1.0, 0.0, 0.0, seed, sw.elapsed_ms(),
                       bad});
    }
    return out;
}

inline std::vector<ExperimentResult> conservation_suite(std::span<const LabeledDpd> corpus, std::uint64_t seed) {
    Stopwatch sw;
    Extreme worst{0, ""};
    for (const auto& d : corpus) {
        const double gap = std::fabs(dict_entropy(d.dist) - dict_entropy_direct(d.dist).value);
        worst.max_with(gap, d.label);
    }
    for (double q : {0.5, 0.9}) {
        const Dpd g = Dpd::geometric(q);
        worst.max_with(std::fabs(dict_entropy(g) - dict_entropy_direct(g).value), "geom,q=" + fmt(q));
    }
    return {{"conservation.dict_entropy", worst.value <= 1e-9, worst.value, 0.0, 1e-9, seed, sw.elapsed_ms(),
             "max gap at " + worst.where}};
}

inline std::vector<ExperimentResult> identities_suite(std::span<const LabeledDpd> corpus, std::uint64_t seed) {
    std::vector<ExperimentResult> out;
    const UciCode& g = code(CodeId::gamma);
    Stopwatch sw;
    Extreme closed{0, ""};
    Extreme rate{0, ""};
    for (const auto& d : corpus) {
        closed.max_with(std::fabs(delta_gap(d.dist, g) - delta_gap_gamma_closed(d.dist)), d.label);
        rate.max_with(std::fabs(coding_rate(d.dist, g) - coding_rate_gamma_closed(d.dist)), d.label);
    }
    out.push_back({"identities.gamma_closed_gap", closed.value <= 1e-10, closed.value, 0.0, 1e-10, seed,
                   sw.elapsed_ms(), "max at " + closed.where});
    out.push_back({"identities.gamma_closed_rate", rate.value <= 1e-12, rate.value, 0.0, 1e-12, seed,
                   sw.elapsed_ms(), "max at " + rate.where});

    for (const auto& c : all_codes()) {
        Stopwatch sw_code;
        Extreme expanded{0, ""};
        for (const auto& d : corpus) {
            expanded.max_with(std::fabs(delta_gap(d.dist, c) - delta_gap_expanded(d.dist, c)), d.label);
        }
        out.push_back({"identities.expanded_gap." + std::string(c.name), expanded.value <= 1e-10, expanded.value, 0.0,
                       1e-10, seed, sw_code.elapsed_ms(), "max at " + expanded.where});
    }
    return out;
}

}  // namespace detail

/// Names accepted by run_rate_suite.
inline constexpr std::array<std::string_view, 8> rate_suites{"thm1",  "thm2",         "thm5",       "thm6",
                                                                "lemmas", "conservation", "identities", "table1"};

inline std::vector<ExperimentResult> run_rate_suite(std::string_view suite, std::size_t trials,
                                                       std::uint64_t seed) {
    if (trials == 0) {
        throw InvalidArgument("trials must be at least 1");
    }
    if (suite == "thm6") {
        return detail::thm6_suite(trials, seed);
    }
    auto corpus = random_corpus(trials, seed);
    if (suite == "thm1") {
        return detail::thm1_suite(corpus, seed);
    }
    if (suite == "thm2") {
        return detail::ratio_suite("thm2", corpus, &UciCode::linear_expansion, seed);
    }
    if (suite == "thm5") {
        return detail::ratio_suite("thm5", corpus, &UciCode::doubling_expansion, seed);
    }
    if (suite == "table1") {
        for (auto& d : adversarial_corpus()) {
            corpus.push_back(std::move(d));
        }
        return detail::ratio_suite("table1", corpus, &UciCode::doubling_expansion, seed);
    }
    if (suite == "lemmas") {
        return detail::lemmas_suite(corpus, seed);
    }
    if (suite == "conservation") {
        return detail::conservation_suite(corpus, seed);
    }
    if (suite == "identities") {
        return detail::identities_suite(corpus, seed);
    }
    throw InvalidArgument("unknown suite '" + std::string(suite) + "'");
}

/// Rate suites over a caller-supplied distribution instead of a random corpus.
inline std::vector<ExperimentResult> run_rate_suite_on(std::string_view suite, const Dpd& p,
                                                          std::uint64_t seed) {
    const std::vector<LabeledDpd> corpus{{p.describe(), p}};
    if (suite == "thm1") {
        return detail::thm1_suite(corpus, seed);
    }
    if (suite == "thm2") {
        return detail::ratio_suite("thm2", corpus, &UciCode::linear_expansion, seed);
    }
    if (suite == "thm5" || suite == "table1") {
        return detail::ratio_suite(suite, corpus, &UciCode::doubling_expansion, seed);
    }
    if (suite == "conservation") {
        return detail::conservation_suite(corpus, seed);
    }
    if (suite == "identities") {
        return detail::identities_suite(corpus, seed);
    }
    if (suite == "thm6") {
        std::vector<ExperimentResult> out;
        for (const auto& c : all_codes()) {
            detail::Stopwatch sw;
            double t_star = 1;
            try {
                t_star = rate_gap_threshold(ThresholdTriple::of(c));
            } catch (const NoThreshold&) {
            }
            if (p.p0() < t_star) {
                out.push_back({"thm6." + std::string(c.name), true, 0.0, 0.0, 0.0, seed, sw.elapsed_ms(),
                               "P(0) below threshold " + detail::fmt(t_star) + "; not covered"});
                continue;
            }
            const double gap = delta_gap(p, c);
            out.push_back({"thm6." + std::string(c.name), gap < 0, gap, 0.0, 0.0, seed, sw.elapsed_ms(),
                           "t*=" + detail::fmt(t_star)});
        }
        return out;
    }
    throw InvalidArgument("suite '" + std::string(suite) + "' does not take a distribution");
}

// ---------------------------------------------------------------------------
// Worked examples.

/// P(0) = 0.9, then n values of 1 / (10 n).
inline Dpd heavy_zero_example(std::size_t n) {
    std::vector<double> probs(n + 1, 1.0 / (10.0 * static_cast<double>(n)));
    probs[0] = 0.9;
    return Dpd::from_probabilities(std::move(probs));
}

/// Four values of 0.24, then n values of 1 / (25 n).
inline Dpd flat_head_example(std::size_t n) {
    std::vector<double> probs(n + 4, 1.0 / (25.0 * static_cast<double>(n)));
    std::fill_n(probs.begin(), 4, 0.24);
    return Dpd::from_probabilities(std::move(probs));
}

/// Upper bound on the gamma rate gap that only uses P(0), P(1) and P(3):
/// 1 - 2p + 2p(1 - p)(1 + p^2 + p^6 / (1 - p^8)) - 2 P(1) - 2 P(3).
inline double gamma_gap_head_bound(double p0, double p1, double p3) {
    const double p2 = p0 * p0;
    const double p6 = p2 * p2 * p2;
    return 1 - 2 * p0 + 2 * p0 * (1 - p0) * (1 + p2 + p6 / (1 - p6 * p2)) - 2 * p1 - 2 * p3;
}

inline std::vector<ExperimentResult> run_worked_examples(std::size_t n = 10'000) {
    std::vector<ExperimentResult> out;
    const UciCode& g = code(CodeId::gamma);
    {
        detail::Stopwatch sw;
        const Dpd p = heavy_zero_example(n);
        const double gap = delta_gap(p, g);
        out.push_back({"examples.heavy_zero.delta", gap < 0, gap, 0.0, 0.0, 0, sw.elapsed_ms(),
                       "n=" + std::to_string(n)});
        const double h = entropy(p);
        const double want = 0.1 * std::log2(10.0 * static_cast<double>(n)) - 0.9 * std::log2(0.9);
        out.push_back({"examples.heavy_zero.entropy", std::fabs(h - want) <= 1e-6, h, want, 1e-6, 0, sw.elapsed_ms(),
                       ""});
    }
    {
        detail::Stopwatch sw;
        const Dpd p = flat_head_example(n);
        const double bound = gamma_gap_head_bound(p.prob(0), p.prob(1), p.prob(3));
        out.push_back({"examples.flat_head.bound", std::fabs(bound - -0.0541) <= 5e-4, bound, -0.0541, 5e-4, 0,
                       sw.elapsed_ms(), ""});
        const double gap = delta_gap_gamma_closed(p);
        out.push_back({"examples.flat_head.delta", gap < 0 && gap <= bound, gap, 0.0, 0.0, 0, sw.elapsed_ms(),
                       "exact gap, below the head bound"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Asymptotic behavior.

struct SweepPoint {
    double target_entropy = 0;
    double entropy = 0;
    /// 1 - q of the tuned geometric source.
    double one_minus_q = 0;
    double ratio_guci = 0;
};

/// Geometric source whose entropy is within `tolerance` of `target`,
/// found by bisection on log(1 - q).
inline Dpd geometric_with_entropy(double target, double tolerance = 1e-9) {
    if (!(target > 0)) {
        throw InvalidArgument("target entropy must be positive");
    }
    // Entropy decreases as 1 - q grows.
    double lo = std::log(1e-300);
    double hi = std::log1p(-1e-16);
    auto h_at = [](double log_t) { return entropy(Dpd::geometric_from_complement(std::exp(log_t))); };
    if (h_at(lo) < target || h_at(hi) > target) {
        throw InvalidArgument("cannot bracket entropy " + detail::fmt(target) + " with a geometric source");
    }
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double h = h_at(mid);
        if (std::fabs(h - target) <= tolerance) {
            return Dpd::geometric_from_complement(std::exp(mid));
        }
        (h > target ? lo : hi) = mid;
    }
    throw InvalidArgument("entropy tuning did not converge for " + detail::fmt(target));
}

inline std::vector<SweepPoint> asymptotic_sweep(const UciCode& c, std::span<const double> targets) {
    std::vector<SweepPoint> out;
    for (double target : targets) {
        const Dpd p = geometric_with_entropy(target);
        SweepPoint pt;
        pt.target_entropy = target;
        pt.entropy = entropy(p);
        pt.one_minus_q = p.ratio_complement();
        pt.ratio_guci = coding_rate(p, c) / pt.entropy;
        out.push_back(pt);
    }
    return out;
}

inline constexpr std::array<double, 5> sweep_targets{2, 5, 10, 20, 30};

inline std::vector<ExperimentResult> run_asymptotic_suite() {
    std::vector<ExperimentResult> out;
    for (CodeId id : {CodeId::delta, CodeId::omega}) {
        detail::Stopwatch sw;
        const auto pts = asymptotic_sweep(code(id), sweep_targets);
        bool decreasing = true;
        std::string trace;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k > 0 && !(pts[k].ratio_guci < pts[k - 1].ratio_guci)) {
                decreasing = false;
            }
            trace += (k ? " " : "") + ("H=" + detail::fmt(pts[k].target_entropy) + ":" +
                                       detail::fmt(pts[k].ratio_guci));
        }
        const std::string name = "asymptotic." + std::string(code(id).name);
        out.push_back({name + ".decreasing", decreasing, pts.back().ratio_guci, 0.0, 0.0, 0, sw.elapsed_ms(), trace});
        if (id == CodeId::delta) {
            out.push_back({name + ".at_30", pts.back().ratio_guci <= 1.5, pts.back().ratio_guci, 1.5, 0.0, 0,
                           sw.elapsed_ms(), ""});
        }
    }
    {
        detail::Stopwatch sw;
        const std::array<double, 1> top{30};
        const double ratio = asymptotic_sweep(code(CodeId::gamma), top).front().ratio_guci;
        out.push_back({"asymptotic.gamma.control", ratio > 1.8, ratio, 1.8, 0.0, 0, sw.elapsed_ms(),
                       "gamma stays away from 1"});
    }
    return out;
}

/// Smallest n0 with L(n) <= n for every n >= n0. Scans to 2^20; beyond that
/// a + b log2 n <= n holds because it does at 2^20 and its slope is below 1.
inline std::uint64_t find_linear_dominance_n0(const UciCode& c) {
    constexpr std::uint64_t scan = std::uint64_t{1} << 20;
    std::uint64_t last_bad = 0;
    for (std::uint64_t n = 1; n <= scan; ++n) {
        if (c.length_fn(n) > n) {
            last_bad = n;
        }
    }
    if (!(c.linear.at(scan) <= static_cast<double>(scan) && c.linear.slope() / (scan * std::numbers::ln2) < 1)) {
        throw InvalidArgument(std::string(c.name) + " length bound does not certify dominance past 2^20");
    }
    return last_bad + 1;
}

// ---------------------------------------------------------------------------
// Static checks over the length functions.

inline std::vector<ExperimentResult> run_kraft_suite(std::uint64_t limit = std::uint64_t{1} << 16) {
    std::vector<ExperimentResult> out;
    for (const auto& c : all_codes()) {
        detail::Stopwatch sw;
        // Partial sums grow with n, so the sum at `limit` bounds every earlier one.
        const auto total = kraft_partial_sum(c, limit);
        const std::string bad = total.at_most_one() ? "" : "n=" + std::to_string(limit);
        out.push_back({"kraft." + std::string(c.name), bad.empty(), total.value(), 1.0, 0.0, 0, sw.elapsed_ms(), bad});
    }
    {
        detail::Stopwatch sw;
        std::string bad;
        for (unsigned k = 1; k <= 16 && bad.empty(); ++k) {
            const auto s = kraft_partial_sum(code(CodeId::gamma), (std::uint64_t{1} << k) - 1);
            const std::uint64_t want = (std::uint64_t{1} << DyadicSum::exponent) -
                                       (std::uint64_t{1} << (DyadicSum::exponent - k));
            if (s.numerator != want) {
                bad = "k=" + std::to_string(k);
            }
        }
        out.push_back({"kraft.gamma_dyadic", bad.empty(), 0.0, 0.0, 0.0, 0, sw.elapsed_ms(), bad});
    }
    return out;
}

inline std::vector<ExperimentResult> run_bounds_suite(std::uint64_t limit = std::uint64_t{1} << 20) {
    std::vector<ExperimentResult> out;
    for (const auto& c : all_codes()) {
        for (BoundForm form : {BoundForm::linear, BoundForm::doubling, BoundForm::floor}) {
            detail::Stopwatch sw;
            const auto check = verify_length_bound(c, form, limit);
            const char* form_name = form == BoundForm::linear ? "linear" : form == BoundForm::doubling ? "doubling"
                                                                                                       : "floor";
            out.push_back({"bounds." + std::string(c.name) + "." + form_name, check.pass,
                           static_cast<double>(check.checked), static_cast<double>(limit), 0.0, 0, sw.elapsed_ms(),
                           check.counterexample ? "n=" + std::to_string(*check.counterexample) : ""});
        }
    }
    return out;
}

}  // namespace guci
