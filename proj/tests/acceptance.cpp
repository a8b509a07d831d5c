// One pass/fail line per acceptance criterion. Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "guci/container.hpp"
#include "guci/harness.hpp"
#include "oracles.hpp"

using namespace guci;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double budget_ms;
    std::function<Outcome()> check;
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

const std::array<CodeId, 3> codecs{CodeId::gamma, CodeId::delta, CodeId::omega};

Outcome golden_codewords() {
    const bool ok = code(CodeId::gamma).encode(9).to_string() == "0001001" && lengths::gamma(9) == 7 &&
                    unary(1).to_string() == "1" && unary(2).to_string() == "01" &&
                    unary(5).to_string() == "00001" && binary(9).to_string() == "1001" &&
                    binary_trimmed(9).to_string() == "001";
    return {ok, "gamma(9)=" + code(CodeId::gamma).encode(9).to_string()};
}

Outcome roundtrip_and_prefix() {
    for (CodeId id : codecs) {
        const auto& c = code(id);
        BitStream s;
        for (std::uint64_t n = 1; n <= (1u << 20); ++n) {
            c.encode(s, n);
        }
        BitReader in(s);
        for (std::uint64_t n = 1; n <= (1u << 20); ++n) {
            if (c.decode(in) != n) {
                return {false, std::string(c.name) + " n=" + std::to_string(n)};
            }
        }
        std::mt19937_64 rng(0xACCE55);
        BitStream r;
        std::vector<std::uint64_t> values(100'000);
        for (auto& v : values) {
            v = (rng() >> 1) | 1;
            c.encode(r, v);
        }
        BitReader rin(r);
        for (auto v : values) {
            if (c.decode(rin) != v) {
                return {false, std::string(c.name) + " value " + std::to_string(v)};
            }
        }
        // Pairwise: word a prefixes word b iff b's top |a| bits equal a.
        struct Word {
            std::uint64_t bits;
            unsigned length;
        };
        std::vector<Word> words;
        for (std::uint64_t n = 1; n <= 4096; ++n) {
            const auto w = c.encode(n);
            BitReader wr(w);
            words.push_back({wr.read_bits(static_cast<unsigned>(w.bit_length())),
                             static_cast<unsigned>(w.bit_length())});
        }
        for (std::size_t i = 0; i < words.size(); ++i) {
            for (std::size_t j = 0; j < words.size(); ++j) {
                if (i != j && words[i].length <= words[j].length &&
                    (words[j].bits >> (words[j].length - words[i].length)) == words[i].bits) {
                    return {false, std::string(c.name) + " " + std::to_string(i + 1) + " prefixes " +
                                       std::to_string(j + 1)};
                }
            }
        }
    }
    return {true, "2^20 sequential + 1e5 random per code, 4096^2 prefix pairs"};
}

Outcome length_conformance() {
    for (std::uint64_t n = 1; n <= (1u << 20); ++n) {
        const auto d = code(CodeId::delta).encode(n).bit_length();
        const auto w = code(CodeId::omega).encode(n).bit_length();
        if (d != oracle::len_delta(n) || d != lengths::delta(n)) {
            return {false, "delta n=" + std::to_string(n)};
        }
        if (w != oracle::len_omega(n) || w != lengths::omega(n)) {
            return {false, "omega n=" + std::to_string(n)};
        }
        if (w > 3 + 2 * oracle::floor_log2(n)) {
            return {false, "omega floor bound n=" + std::to_string(n)};
        }
    }
    return {true, "n <= 2^20"};
}

Outcome kraft() {
    for (const auto& c : all_codes()) {
        const auto total = kraft_partial_sum(c, 1u << 16);
        if (!total.at_most_one()) {
            return {false, std::string(c.name) + " sum " + fmt(total.value())};
        }
        const auto want = oracle::kraft([&](std::uint64_t n) { return c.length_fn(n); }, 4096);
        const oracle::Rational got(boost::multiprecision::cpp_int(kraft_partial_sum(c, 4096).numerator),
                                   boost::multiprecision::cpp_int(1) << DyadicSum::exponent);
        if (got != want) {
            return {false, std::string(c.name) + " disagrees with rational oracle at 4096"};
        }
    }
    for (unsigned k = 1; k <= 16; ++k) {
        const auto s = kraft_partial_sum(code(CodeId::gamma), (std::uint64_t{1} << k) - 1);
        const oracle::Rational got(boost::multiprecision::cpp_int(s.numerator),
                                   boost::multiprecision::cpp_int(1) << DyadicSum::exponent);
        const oracle::Rational want =
            oracle::Rational(1) - oracle::Rational(1, boost::multiprecision::cpp_int(1) << k);
        if (got != want) {
            return {false, "gamma at 2^" + std::to_string(k) + " - 1"};
        }
    }
    return {true, "all six codes to 2^16; gamma 1 - 2^-k exact for k <= 16"};
}

Outcome length_bounds() {
    std::string detail;
    for (const auto& c : all_codes()) {
        const auto check = verify_length_bound(c, BoundForm::per_code, 1u << 20);
        if (!check.pass) {
            return {false, std::string(c.name) + " fails at n=" + std::to_string(*check.counterexample)};
        }
        const auto& b = c.doubling;
        for (std::uint64_t n = 1; n <= 4096; ++n) {
            if (!oracle::log_linear_holds(c.length_fn(n), n, b.a.num, b.a.den, b.b.num, b.b.den, b.base)) {
                return {false, std::string(c.name) + " oracle rejects n=" + std::to_string(n)};
            }
        }
        detail += std::string(c.name) + ":" + fmt(b.offset()) + "+" + fmt(b.slope()) + "log2n ";
    }
    return {true, detail};
}

Outcome from_results(const std::vector<ExperimentResult>& results) {
    std::string detail;
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.pass;
        detail += r.name + "=" + fmt(r.observed) + (r.pass ? "" : "(FAIL)") + " ";
    }
    return {ok, detail};
}

Outcome theorem1() {
    auto results = run_rate_suite("thm1", 1000, 1);
    // Independent term-by-term check of the same corpus.
    const auto corpus = random_corpus(1000, 1);
    for (CodeId id : codecs) {
        for (const auto& d : corpus) {
            const auto p = d.dist.probabilities();
            const std::vector<double> v(p.begin(), p.end());
            const auto r = oracle::coding_rate(v, [&](std::uint64_t n) { return code(id).length_fn(n); });
            if (r < oracle::entropy(v) - 1e-9) {
                return {false, "oracle: " + d.label + " " + std::string(code(id).name)};
            }
        }
    }
    return from_results(results);
}

Outcome table1() { return from_results(run_rate_suite("table1", 1000, 1)); }

Outcome motivation() {
    bool ok = true;
    std::string detail;
    double previous = 0;
    const std::array<double, 3> eps{1e-3, 1e-4, 1e-5};
    const std::array<double, 3> floor{1e2, 1e3, 1e4};
    for (std::size_t k = 0; k < eps.size(); ++k) {
        const auto r = expansion_ratios(Dpd::from_probabilities({1 - eps[k], eps[k]}), code(CodeId::gamma));
        const bool blow_up = r.ratio_uci_pure > floor[k] && r.ratio_uci_pure > previous;
        const bool bounded = r.ratio_guci <= 2;
        ok = ok && blow_up && bounded;
        previous = r.ratio_uci_pure;
        detail += "eps=" + fmt(eps[k]) + ": E/H=" + fmt(r.ratio_uci_pure) + (blow_up ? "" : " (< " + fmt(floor[k]) + ")") +
                  " R/H=" + fmt(r.ratio_guci) + "; ";
    }
    return {ok, detail};
}

Outcome thresholds() {
    const double hg = threshold_margin({1, 1, 2}, 0.81);
    const double hi = threshold_margin({1, 2.5, 1.5}, 0.83);
    if (!(hg < 0 && hi < 0)) {
        return {false, "h_gamma(0.81)=" + fmt(hg) + " h_iota(0.83)=" + fmt(hi)};
    }
    double worst = -1e300;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        std::mt19937_64 rng(derive_seed(0x7E5, k));
        const double p0 = 0.81 + (0.999 - 0.81) * uniform_open(rng);
        const auto tail = random_dpd(rng);
        const auto p = with_tail(p0, tail.probabilities());
        const double gap = delta_gap(p, code(CodeId::gamma));
        if (!(gap < 0) || !(delta_gap_gamma_closed(p) < 0)) {
            return {false, "trial " + std::to_string(k) + " gap " + fmt(gap)};
        }
        worst = std::max(worst, gap);
    }
    return {true, "h_gamma(0.81)=" + fmt(hg) + " h_iota(0.83)=" + fmt(hi) + " max gap " + fmt(worst)};
}

Outcome examples() {
    auto out = from_results(run_worked_examples());
    const auto p = heavy_zero_example(10'000);
    const auto v = p.probabilities();
    const double h = static_cast<double>(oracle::entropy({v.begin(), v.end()}));
    const double want = 0.1 * std::log2(1e5) - 0.9 * std::log2(0.9);
    if (std::fabs(h - want) > 1e-6) {
        return {false, "oracle entropy " + fmt(h)};
    }
    return out;
}

Outcome identities() {
    const auto corpus = random_corpus(1000, 11);
    double gap = 0;
    double conservation = 0;
    for (const auto& d : corpus) {
        gap = std::max(gap, std::fabs(delta_gap(d.dist, code(CodeId::gamma)) - delta_gap_gamma_closed(d.dist)));
        const auto v = d.dist.probabilities();
        const double direct = static_cast<double>(oracle::dict_entropy({v.begin(), v.end()}));
        conservation = std::max(conservation, std::fabs(dict_entropy(d.dist) - direct));
        conservation = std::max(conservation, std::fabs(dict_entropy_direct(d.dist).value - direct));
    }
    return {gap <= 1e-10 && conservation <= 1e-9,
            "max closed-form gap " + fmt(gap) + ", max conservation gap " + fmt(conservation)};
}

Outcome convergence() {
    const auto p = Dpd::geometric(0.5);
    const auto s = sample_stream(p, 1'000'000, 2024);
    const auto& g = code(CodeId::gamma);
    const double guci_gap = std::fabs(empirical_rate(s, g, Mode::guci) - coding_rate(p, g));
    const double uci_gap = std::fabs(empirical_rate(s, g, Mode::uci) - expected_uci_length(p, g));
    return {guci_gap <= 0.01 && uci_gap <= 0.01, "guci gap " + fmt(guci_gap) + ", uci gap " + fmt(uci_gap)};
}

Outcome asymptotic() {
    const auto delta = asymptotic_sweep(code(CodeId::delta), sweep_targets);
    bool decreasing = true;
    std::string detail = "delta:";
    for (std::size_t k = 0; k < delta.size(); ++k) {
        if (k > 0 && !(delta[k].ratio_guci < delta[k - 1].ratio_guci)) {
            decreasing = false;
        }
        detail += " H=" + fmt(delta[k].target_entropy) + "->" + fmt(delta[k].ratio_guci);
    }
    const std::array<double, 1> top{30};
    const double gamma_top = asymptotic_sweep(code(CodeId::gamma), top).front().ratio_guci;
    const bool delta_top = delta.back().ratio_guci <= 1.5;
    detail += decreasing ? "; decreasing" : "; NOT strictly decreasing";
    detail += "; gamma at 30: " + fmt(gamma_top);
    return {decreasing && delta_top && gamma_top > 1.8, detail};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "golden codewords", 1, golden_codewords},
        {2, "roundtrip and prefix-freeness", 30'000, roundtrip_and_prefix},
        {3, "delta/omega length conformance", 10'000, length_conformance},
        {4, "Kraft partial sums", 5'000, kraft},
        {5, "length bounds to 2^20", 30'000, length_bounds},
        {6, "coding rate >= entropy", 60'000, theorem1},
        {7, "expansion factors per code", 120'000, table1},
        {8, "UCI ratio blow-up near H = 0", 5'000, motivation},
        {9, "rate-gap thresholds", 60'000, thresholds},
        {10, "worked examples", 5'000, examples},
        {11, "identity cross-checks", 60'000, identities},
        {12, "empirical convergence", 30'000, convergence},
        {13, "asymptotic sweep", 60'000, asymptotic},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = ms <= c.budget_ms;
        const bool pass = o.pass && in_budget;
        failures += pass ? 0 : 1;
        std::printf("%s  [%2d] %-34s %9.1f ms  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.title, ms, o.detail.c_str(),
                    in_budget ? "" : " (over time budget)");
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
