// guci: encode/decode integer streams and check the rate analysis.
//
// Exit codes:
//   0 ok
//   1 unreadable input or a bad symbol (encode)
//   2 write failure
//   3 corrupt container (decode)
//   4 invalid distribution spec or unusable distribution
//   5 a verification check failed

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "guci/container.hpp"
#include "guci/dist_spec.hpp"
#include "guci/harness.hpp"

namespace {

using nlohmann::json;

enum Exit : int { ok = 0, bad_input = 1, write_failed = 2, corrupt = 3, bad_dist = 4, check_failed = 5 };

struct Failure {
    int code;
    std::string message;
};

std::vector<std::uint64_t> read_symbols(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Failure{bad_input, "cannot read " + path};
    }
    std::vector<std::uint64_t> out;
    std::string token;
    while (in >> token) {
        std::uint64_t v = 0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || end != token.data() + token.size()) {
            throw Failure{bad_input, "not a non-negative integer: '" + token + "'"};
        }
        if (v > guci::max_symbol) {
            throw Failure{bad_input, "symbol " + token + " exceeds " + std::to_string(guci::max_symbol)};
        }
        out.push_back(v);
    }
    if (in.bad()) {
        throw Failure{bad_input, "error reading " + path};
    }
    return out;
}

std::vector<std::uint8_t> read_bytes(const std::string& path, int failure_code) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Failure{failure_code, "cannot read " + path};
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.close();
    if (!out) {
        throw Failure{write_failed, "cannot write " + path};
    }
}

json to_json(const guci::ExperimentResult& r) {
    return {{"name", r.name},         {"pass", r.pass},   {"observed", r.observed},
            {"expected", r.expected}, {"tolerance", r.tolerance}, {"seed", r.seed},
            {"runtime_ms", r.runtime_ms}, {"detail", r.detail}};
}

guci::Dpd dist_or_fail(const std::string& spec) {
    try {
        return guci::parse_dist_spec(spec);
    } catch (const guci::Error& e) {
        throw Failure{bad_dist, e.what()};
    }
}

const guci::UciCode& code_or_fail(const std::string& name, int failure_code) {
    try {
        return guci::code_by_name(name);
    } catch (const guci::Error& e) {
        throw Failure{failure_code, e.what()};
    }
}

// --- commands --------------------------------------------------------------

struct EncodeArgs {
    std::string code = "gamma";
    std::string mode = "guci";
    std::string in;
    std::string out;
};

int cmd_encode(const EncodeArgs& a) {
    const auto& c = code_or_fail(a.code, bad_input);
    const auto symbols = read_symbols(a.in);
    guci::EncodedStream stream;
    try {
        stream = guci::encode(symbols, c, guci::mode_by_name(a.mode));
    } catch (const guci::InvalidArgument& e) {
        throw Failure{bad_input, e.what()};
    }
    const auto bytes = guci::serialize(stream);
    write_file(a.out, std::string(bytes.begin(), bytes.end()));

    const auto bits = stream.payload.bit_length();
    json report{{"code", c.name},
                {"mode", guci::mode_name(stream.mode)},
                {"symbols", stream.symbol_count},
                {"payload_bits", bits},
                {"container_bytes", bytes.size()},
                {"bits_per_symbol", symbols.empty() ? 0.0 : static_cast<double>(bits) / symbols.size()}};
    std::cout << report.dump() << '\n';
    return ok;
}

struct DecodeArgs {
    std::string in;
    std::string out;
};

int cmd_decode(const DecodeArgs& a) {
    const auto bytes = read_bytes(a.in, corrupt);
    std::vector<std::uint64_t> symbols;
    guci::EncodedStream stream;
    try {
        stream = guci::deserialize(bytes);
        symbols = guci::decode(stream);
    } catch (const guci::Error& e) {
        throw Failure{corrupt, e.what()};
    }
    std::string text;
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        text += std::to_string(symbols[k]);
        text += '\n';
    }
    write_file(a.out, text);
    json report{{"code", guci::code(stream.code).name},
                {"mode", guci::mode_name(stream.mode)},
                {"symbols", symbols.size()}};
    std::cout << report.dump() << '\n';
    return ok;
}

struct AnalyzeArgs {
    std::string dist;
    std::string code = "gamma";
};

int cmd_analyze(const AnalyzeArgs& a) {
    const auto p = dist_or_fail(a.dist);
    const auto& c = code_or_fail(a.code, bad_dist);
    guci::AnalysisReport r;
    try {
        r = guci::expansion_ratios(p, c);
    } catch (const guci::Error& e) {
        throw Failure{bad_dist, e.what()};
    }
    json report{{"dist", p.describe()},
                {"code", c.name},
                {"entropy_bits", r.entropy_bits},
                {"expected_uci_bits", r.expected_uci_bits},
                {"coding_rate_bits", r.coding_rate_bits},
                {"delta_bits", r.delta_bits},
                {"ratio_uci", r.ratio_uci},
                {"ratio_uci_pure", r.ratio_uci_pure},
                {"ratio_guci", r.ratio_guci},
                {"tail_bound", r.tail_bound},
                {"terms_used", r.terms_used}};
    std::cout << report.dump() << '\n';
    return ok;
}

struct VerifyArgs {
    std::string suite = "all";
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::string dist;
};

std::vector<guci::ExperimentResult> run_suite(const std::string& suite, const VerifyArgs& a,
                                              const std::optional<guci::Dpd>& p) {
    if (suite == "kraft") {
        return guci::run_kraft_suite();
    }
    if (suite == "bounds") {
        return guci::run_bounds_suite();
    }
    if (suite == "examples") {
        return guci::run_worked_examples();
    }
    if (suite == "asymptotic") {
        return guci::run_asymptotic_suite();
    }
    if (p && suite != "lemmas") {
        return guci::run_rate_suite_on(suite, *p, a.seed);
    }
    return guci::run_rate_suite(suite, a.trials, a.seed);
}

int cmd_verify(const VerifyArgs& a) {
    std::optional<guci::Dpd> p;
    if (!a.dist.empty()) {
        p = dist_or_fail(a.dist);
        try {
            if (!(guci::entropy(*p) > 0)) {
                throw Failure{bad_dist, "invalid distribution: zero entropy"};
            }
        } catch (const guci::Error& e) {
            throw Failure{bad_dist, e.what()};
        }
    }
    std::vector<std::string> suites;
    if (a.suite == "all") {
        suites = {"kraft", "bounds"};
        for (auto s : guci::rate_suites) {
            suites.emplace_back(s);
        }
        suites.insert(suites.end(), {"examples", "asymptotic"});
    } else {
        suites = {a.suite};
    }

    const guci::ExperimentResult* first_failure = nullptr;
    std::vector<guci::ExperimentResult> all;
    for (const auto& s : suites) {
        for (auto& r : run_suite(s, a, p)) {
            std::cout << to_json(r).dump() << '\n';
            all.push_back(std::move(r));
        }
    }
    for (const auto& r : all) {
        if (!r.pass) {
            first_failure = &r;
            break;
        }
    }
    if (first_failure) {
        std::cerr << "FAILED " << first_failure->name << ": observed " << first_failure->observed << ", expected "
                  << first_failure->expected << " (" << first_failure->detail << ")\n";
        return check_failed;
    }
    return ok;
}

struct BenchArgs {
    std::string dist;
    std::string code = "gamma";
    std::uint64_t symbols = 1'000'000;
    std::uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& a) {
    if (a.symbols == 0) {
        throw Failure{bad_dist, "--symbols must be positive"};
    }
    const auto p = dist_or_fail(a.dist);
    const auto& c = code_or_fail(a.code, bad_dist);
    if (!c.has_codec()) {
        throw Failure{bad_dist, std::string(c.name) + " has no codec"};
    }
    double rate = 0;
    double baseline = 0;
    try {
        rate = guci::coding_rate(p, c);
        baseline = guci::expected_uci_length(p, c);
    } catch (const guci::Error& e) {
        throw Failure{bad_dist, e.what()};
    }
    const auto stream = guci::sample_stream(p, a.symbols, a.seed);
    std::cout << "dist,code,mode,symbols,empirical,analytic,abs_gap\n";
    for (auto mode : {guci::Mode::guci, guci::Mode::uci}) {
        const double empirical = guci::empirical_rate(stream, c, mode);
        const double analytic = mode == guci::Mode::guci ? rate : baseline;
        std::ostringstream row;
        row.precision(12);
        row << '"' << p.describe() << "\"," << c.name << ',' << guci::mode_name(mode) << ',' << a.symbols << ','
            << empirical << ',' << analytic << ',' << std::abs(empirical - analytic);
        std::cout << row.str() << '\n';
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Run-length generalized universal coding of integers"};
    app.require_subcommand(1);

    const std::vector<std::string> codec_names{"gamma", "delta", "omega"};

    EncodeArgs enc;
    auto* encode = app.add_subcommand("encode", "Encode a text file of integers into a container");
    encode->add_option("--code", enc.code)->check(CLI::IsMember(codec_names));
    encode->add_option("--mode", enc.mode)->check(CLI::IsMember({"guci", "uci"}));
    encode->add_option("--in", enc.in)->required();
    encode->add_option("--out", enc.out)->required();

    DecodeArgs dec;
    auto* decode = app.add_subcommand("decode", "Decode a container back into integers");
    decode->add_option("--in", dec.in)->required();
    decode->add_option("--out", dec.out)->required();

    AnalyzeArgs ana;
    auto* analyze = app.add_subcommand("analyze", "Entropy, rates and expansion ratios of a distribution");
    analyze->add_option("--dist", ana.dist)->required();
    analyze->add_option("--code", ana.code);

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify", "Run verification suites; prints JSON lines");
    verify->add_option("--suite", ver.suite)
        ->check(CLI::IsMember({"all", "kraft", "bounds", "thm1", "thm2", "thm5", "thm6", "lemmas", "conservation",
                               "identities", "examples", "asymptotic", "table1"}));
    verify->add_option("--trials", ver.trials)->check(CLI::PositiveNumber);
    verify->add_option("--seed", ver.seed);
    verify->add_option("--dist", ver.dist);

    BenchArgs ben;
    auto* bench = app.add_subcommand("bench", "Empirical vs analytic rates as CSV");
    bench->add_option("--dist", ben.dist)->required();
    bench->add_option("--code", ben.code);
    bench->add_option("--symbols", ben.symbols);
    bench->add_option("--seed", ben.seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (encode->parsed()) {
            return cmd_encode(enc);
        }
        if (decode->parsed()) {
            return cmd_decode(dec);
        }
        if (analyze->parsed()) {
            return cmd_analyze(ana);
        }
        if (verify->parsed()) {
            return cmd_verify(ver);
        }
        return cmd_bench(ben);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    }
}
