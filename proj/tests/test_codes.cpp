#include <gtest/gtest.h>

#include <random>
#include <set>

#include "guci/codes.hpp"
#include "oracles.hpp"

using namespace guci;

namespace {

const std::array<CodeId, 3> codecs{CodeId::gamma, CodeId::delta, CodeId::omega};

std::string oracle_word(CodeId id, std::uint64_t n) {
    switch (id) {
        case CodeId::gamma: return oracle::gamma(n);
        case CodeId::delta: return oracle::delta(n);
        default: return oracle::omega(n);
    }
}

unsigned oracle_length(CodeId id, std::uint64_t n) {
    switch (id) {
        case CodeId::gamma: return oracle::len_gamma(n);
        case CodeId::delta: return oracle::len_delta(n);
        case CodeId::omega: return oracle::len_omega(n);
        case CodeId::eta: return oracle::len_eta(n);
        case CodeId::theta: return oracle::len_theta(n);
        case CodeId::iota: return oracle::len_iota(n);
    }
    return 0;
}

}  // namespace

TEST(BuildingBlocks, GoldenWords) {
    EXPECT_EQ(unary(1).to_string(), "1");
    EXPECT_EQ(unary(2).to_string(), "01");
    EXPECT_EQ(unary(5).to_string(), "00001");
    EXPECT_EQ(binary(9).to_string(), "1001");
    EXPECT_EQ(binary_trimmed(9).to_string(), "001");
    EXPECT_TRUE(binary_trimmed(1).empty());
    EXPECT_THROW(unary(0), InvalidArgument);
}

TEST(Codecs, GoldenWords) {
    EXPECT_EQ(code(CodeId::gamma).encode(9).to_string(), "0001001");
    EXPECT_EQ(code(CodeId::gamma).encode(1).to_string(), "1");
    EXPECT_EQ(code(CodeId::delta).encode(9).to_string(), "00100001");
    EXPECT_EQ(code(CodeId::delta).encode(1).to_string(), "1");
    EXPECT_EQ(code(CodeId::omega).encode(9).to_string(), "1110010");
    EXPECT_EQ(code(CodeId::omega).encode(1).to_string(), "0");
    EXPECT_EQ(code(CodeId::omega).encode(100).to_string(), "1011011001000");
}

TEST(Codecs, MatchStringOracle) {
    for (CodeId id : codecs) {
        for (std::uint64_t n = 1; n <= 5000; ++n) {
            ASSERT_EQ(code(id).encode(n).to_string(), oracle_word(id, n)) << code(id).name << " n=" << n;
        }
    }
}

TEST(Codecs, RoundTripRandom63Bit) {
    std::mt19937_64 rng(3);
    for (CodeId id : codecs) {
        BitStream s;
        std::vector<std::uint64_t> values;
        for (int k = 0; k < 20000; ++k) {
            const std::uint64_t v = (rng() >> (1 + rng() % 63)) | 1;
            values.push_back(v);
            code(id).encode(s, v);
        }
        values.push_back(std::numeric_limits<std::uint64_t>::max());
        code(id).encode(s, values.back());
        BitReader in(s);
        for (std::uint64_t v : values) {
            ASSERT_EQ(code(id).decode(in), v) << code(id).name;
        }
        EXPECT_TRUE(in.at_end());
    }
}

TEST(Codecs, RejectZeroAndMissingCodec) {
    for (CodeId id : codecs) {
        EXPECT_THROW(code(id).encode(0), InvalidArgument);
    }
    EXPECT_THROW(code(CodeId::eta).encode(3), InvalidArgument);
    EXPECT_FALSE(code(CodeId::iota).has_codec());
}

TEST(Codecs, TruncatedInputThrows) {
    for (CodeId id : codecs) {
        const auto word = code(id).encode(1000).to_string();
        const auto cut = BitStream::from_string(word.substr(0, word.size() - 1));
        BitReader in(cut);
        EXPECT_THROW(code(id).decode(in), TruncatedInput) << code(id).name;
    }
}

TEST(Codecs, OverlongGammaPrefixIsCorrupt) {
    const auto s = BitStream::from_string(std::string(64, '0') + "1" + std::string(64, '0'));
    BitReader in(s);
    EXPECT_THROW(code(CodeId::gamma).decode(in), CorruptStream);
}

TEST(Codecs, PrefixFreeUpTo4096) {
    for (CodeId id : codecs) {
        std::set<std::string> words;
        for (std::uint64_t n = 1; n <= 4096; ++n) {
            words.insert(code(id).encode(n).to_string());
        }
        ASSERT_EQ(words.size(), 4096u);
        // In sorted order a word that prefixes another is immediately followed by one it prefixes.
        for (auto it = words.begin(), next = std::next(it); next != words.end(); ++it, ++next) {
            ASSERT_NE(next->rfind(*it, 0), 0u) << code(id).name << ": " << *it << " prefixes " << *next;
        }
    }
}

TEST(Lengths, MatchFormulasAndCodewords) {
    for (const auto& c : all_codes()) {
        for (std::uint64_t n = 1; n <= (1u << 16); ++n) {
            ASSERT_EQ(c.length_fn(n), oracle_length(c.id, n)) << c.name << " n=" << n;
        }
        for (unsigned k = 16; k < 64; ++k) {
            const std::uint64_t n = std::uint64_t{1} << k;
            ASSERT_EQ(c.length_fn(n), oracle_length(c.id, n));
            ASSERT_EQ(c.length_fn(n - 1), oracle_length(c.id, n - 1));
            ASSERT_EQ(c.length_fn(n + 1), oracle_length(c.id, n + 1));
        }
        if (c.has_codec()) {
            for (std::uint64_t n = 1; n <= 4096; ++n) {
                ASSERT_EQ(c.encode(n).bit_length(), c.length_fn(n));
            }
        }
    }
}

TEST(Lengths, Spot) {
    EXPECT_EQ(lengths::gamma(1), 1u);
    EXPECT_EQ(lengths::gamma(9), 7u);
    EXPECT_EQ(lengths::delta(9), 8u);
    EXPECT_EQ(lengths::omega(9), 7u);
    EXPECT_EQ(lengths::omega(100), 13u);
    for (const auto& c : all_codes()) {
        EXPECT_EQ(c.length_fn(1), 1u) << c.name;
        EXPECT_THROW((void)c.length_of(0), InvalidArgument);
    }
}

TEST(Lengths, Monotone) {
    for (const auto& c : all_codes()) {
        EXPECT_FALSE(find_monotonicity_violation(c, 1u << 18)) << c.name;
    }
}

TEST(LengthRuns, CoverAndAreConstant) {
    for (const auto& c : all_codes()) {
        const auto runs = length_runs(c, 1u << 14);
        std::uint64_t next = 1;
        for (std::size_t k = 0; k < runs.size(); ++k) {
            ASSERT_EQ(runs[k].first, next);
            for (std::uint64_t n = runs[k].first; n <= runs[k].last; ++n) {
                ASSERT_EQ(c.length_fn(n), runs[k].length) << c.name << " n=" << n;
            }
            if (k > 0) {
                ASSERT_NE(runs[k].length, runs[k - 1].length);
            }
            next = runs[k].last + 1;
        }
        EXPECT_EQ(next, (1u << 14) + 1);
        EXPECT_EQ(length_runs(c).back().last, std::numeric_limits<std::uint64_t>::max());
    }
}

TEST(Kraft, MatchesExactRationalOracle) {
    for (const auto& c : all_codes()) {
        for (std::uint64_t limit : {1u, 2u, 7u, 100u, 1000u}) {
            const auto got = kraft_partial_sum(c, limit);
            const auto want = oracle::kraft([&](std::uint64_t n) { return oracle_length(c.id, n); }, limit);
            const oracle::Rational as_rational(boost::multiprecision::cpp_int(got.numerator),
                                               boost::multiprecision::cpp_int(1) << DyadicSum::exponent);
            ASSERT_EQ(as_rational, want) << c.name << " limit=" << limit;
        }
        EXPECT_TRUE(kraft_partial_sum(c, 1u << 16).at_most_one()) << c.name;
    }
}

TEST(Kraft, GammaAtDyadicPoints) {
    for (unsigned k = 1; k <= 30; ++k) {
        const auto s = kraft_partial_sum(code(CodeId::gamma), (std::uint64_t{1} << k) - 1);
        EXPECT_EQ(s.numerator, (std::uint64_t{1} << 62) - (std::uint64_t{1} << (62 - k))) << "k=" << k;
    }
}

TEST(Bounds, HoldForAllCodes) {
    for (const auto& c : all_codes()) {
        for (auto form : {BoundForm::linear, BoundForm::doubling, BoundForm::floor, BoundForm::per_code}) {
            const auto check = verify_length_bound(c, form, 1u << 16);
            EXPECT_TRUE(check.pass) << c.name << " counterexample " << check.counterexample.value_or(0);
        }
    }
}

TEST(Bounds, ExactComparisonAgreesWithOracle) {
    for (const auto& c : all_codes()) {
        const auto& b = c.linear;
        for (std::uint64_t n = 1; n <= 4096; ++n) {
            for (std::uint32_t L : {c.length_fn(n), c.length_fn(n) + 1, c.length_fn(n) + 2}) {
                ASSERT_EQ(b.holds(L, n), oracle::log_linear_holds(L, n, b.a.num, b.a.den, b.b.num, b.b.den, b.base))
                    << c.name << " n=" << n << " L=" << L;
            }
        }
    }
}

TEST(Bounds, TightCasesAreEqualities) {
    // gamma meets 1 + 2 log2 n with equality at powers of two.
    EXPECT_TRUE(code(CodeId::gamma).linear.holds(7, 8));
    EXPECT_FALSE(code(CodeId::gamma).linear.holds(8, 8));
    // omega: L(2) = 3 = 11/9 + 22/9 * 1 - 2/3, and 3 + 2 floor(log2 n) is tight at n = 2.
    EXPECT_TRUE(code(CodeId::omega).floor.holds(5, 2));
    EXPECT_FALSE(code(CodeId::omega).floor.holds(6, 2));
}

TEST(Bounds, OmegaFloorBoundToTwoTo20) {
    const auto check = verify_length_bound(code(CodeId::omega), code(CodeId::omega).floor, 1u << 20);
    EXPECT_TRUE(check.pass);
    EXPECT_EQ(check.checked, (1u << 20) - 1);
}

TEST(Lookup, ByNameAndContainerId) {
    EXPECT_EQ(code_by_name("delta").id, CodeId::delta);
    EXPECT_THROW(code_by_name("zeta"), InvalidArgument);
    EXPECT_EQ(code_by_container_id(2).id, CodeId::omega);
    EXPECT_THROW(code_by_container_id(9), CorruptStream);
}

TEST(Expansion, KnownConstants) {
    EXPECT_DOUBLE_EQ(code(CodeId::gamma).doubling_expansion(), 2.0);
    EXPECT_DOUBLE_EQ(code(CodeId::omega).doubling_expansion(), 22.0 / 9);
    EXPECT_DOUBLE_EQ(code(CodeId::delta).doubling_expansion(), 8.0 / 3);
    EXPECT_DOUBLE_EQ(code(CodeId::theta).doubling_expansion(), 8.0 / 3);
    EXPECT_DOUBLE_EQ(code(CodeId::iota).doubling_expansion(), 8.0 / 3);
    EXPECT_NEAR(code(CodeId::eta).doubling_expansion(), 12 / (1 + 2 * std::log2(5.0)), 1e-15);
    EXPECT_DOUBLE_EQ(code(CodeId::gamma).linear_expansion(), 4.0);
}
