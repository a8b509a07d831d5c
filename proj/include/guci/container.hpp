#pragma once

// Variable-to-variable coding of non-negative integer streams.
//
// The parser splits a stream into words 0^i n (i >= 0 zeros, then a nonzero
// terminator n) and the string encoder maps each word to psi(i + 1) psi(n).
// The per-symbol baseline maps each symbol s to psi(s + 1).
//
// Container layout (big-endian, bit-exact):
//   "GUCI" | code_id:u8 | mode:u8 | symbol_count:u64 | payload bytes
// The payload is MSB-first and zero-padded to a byte boundary.
//
// Finite streams may end inside a zero run. symbol_count is authoritative:
// for codes where every codeword contains a one bit (gamma, delta) a trailing
// zero run costs no payload bits and is recovered from the count. omega(1) is
// the all-zero codeword "0", so an all-zero tail would be ambiguous with
// padding; for such codes the trailing run of t zeros is closed by psi(t + 1),
// which the decoder recognizes because a full word would overshoot the count.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "guci/bitio.hpp"
#include "guci/codes.hpp"
#include "guci/error.hpp"

namespace guci {

/// Largest encodable symbol; keeps s + 1 and every codeword length in range.
inline constexpr std::uint64_t max_symbol = (std::uint64_t{1} << 62) - 2;

inline constexpr std::array<std::uint8_t, 4> container_magic{'G', 'U', 'C', 'I'};
inline constexpr std::size_t container_header_size = 14;

struct RunToken {
    std::uint64_t zeros = 0;
    std::uint64_t terminator = 1;

    friend bool operator==(const RunToken&, const RunToken&) = default;
};

struct RunParse {
    std::vector<RunToken> tokens;
    std::uint64_t trailing_zeros = 0;

    friend bool operator==(const RunParse&, const RunParse&) = default;
};

inline RunParse parse_runs(std::span<const std::uint64_t> symbols) {
    RunParse out;
    std::uint64_t run = 0;
    for (std::uint64_t s : symbols) {
        if (s == 0) {
            ++run;
        } else {
            out.tokens.push_back({run, s});
            run = 0;
        }
    }
    out.trailing_zeros = run;
    return out;
}

enum class Mode : std::uint8_t { guci = 0, uci = 1 };

inline std::string_view mode_name(Mode m) { return m == Mode::guci ? "guci" : "uci"; }

inline Mode mode_by_name(std::string_view name) {
    if (name == "guci") {
        return Mode::guci;
    }
    if (name == "uci") {
        return Mode::uci;
    }
    throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

struct EncodedStream {
    CodeId code = CodeId::gamma;
    Mode mode = Mode::guci;
    std::uint64_t symbol_count = 0;
    BitStream payload;

    friend bool operator==(const EncodedStream&, const EncodedStream&) = default;
};

namespace detail {

inline const UciCode& require_codec(const UciCode& c) {
    if (!c.has_codec()) {
        throw InvalidArgument(std::string(c.name) + " code has no codec");
    }
    return c;
}

inline void require_symbol(std::uint64_t s) {
    if (s > max_symbol) {
        throw InvalidArgument("symbol " + std::to_string(s) + " exceeds maximum " + std::to_string(max_symbol));
    }
}

/// psi(1) is all zeros, so trailing zero runs need an explicit closing codeword.
inline bool closes_trailing_run(const UciCode& c) { return !c.encode(1).last_set_bit().has_value(); }

}  // namespace detail

/// Incremental word encoder; words may span push() calls.
class GuciEncoder {
public:
    explicit GuciEncoder(const UciCode& c) : code_(&detail::require_codec(c)) {}

    void push(std::uint64_t symbol) {
        detail::require_symbol(symbol);
        ++count_;
        if (symbol == 0) {
            ++pending_zeros_;
            return;
        }
        code_->encode(payload_, pending_zeros_ + 1);
        code_->encode(payload_, symbol);
        pending_zeros_ = 0;
    }

    void push(std::span<const std::uint64_t> symbols) {
        for (std::uint64_t s : symbols) {
            push(s);
        }
    }

    [[nodiscard]] EncodedStream finish() && {
        if (pending_zeros_ > 0 && detail::closes_trailing_run(*code_)) {
            code_->encode(payload_, pending_zeros_ + 1);
        }
        return {code_->id, Mode::guci, count_, std::move(payload_)};
    }

private:
    const UciCode* code_;
    BitStream payload_;
    std::uint64_t count_ = 0;
    std::uint64_t pending_zeros_ = 0;
};

inline EncodedStream guci_encode(std::span<const std::uint64_t> symbols, const UciCode& c) {
    GuciEncoder enc(c);
    enc.push(symbols);
    return std::move(enc).finish();
}

inline EncodedStream uci_encode_stream(std::span<const std::uint64_t> symbols, const UciCode& c) {
    detail::require_codec(c);
    EncodedStream out{c.id, Mode::uci, symbols.size(), {}};
    for (std::uint64_t s : symbols) {
        detail::require_symbol(s);
        c.encode(out.payload, s + 1);
    }
    return out;
}

inline EncodedStream encode(std::span<const std::uint64_t> symbols, const UciCode& c, Mode mode) {
    return mode == Mode::guci ? guci_encode(symbols, c) : uci_encode_stream(symbols, c);
}

/// Walks the payload, calling emit(value, repeat) for each decoded run of
/// equal symbols. Returns the bit position just past the last codeword.
template <typename Emit>
std::size_t walk_payload(const EncodedStream& stream, Emit&& emit) {
    const UciCode& c = detail::require_codec(code(stream.code));
    BitReader in(stream.payload);
    std::uint64_t produced = 0;
    const std::uint64_t count = stream.symbol_count;

    if (stream.mode == Mode::uci) {
        for (; produced < count; ++produced) {
            const std::uint64_t v = c.decode(in);
            if (v - 1 > max_symbol) {
                throw CorruptStream("symbol out of range");
            }
            emit(v - 1, 1);
        }
    } else if (stream.mode == Mode::guci) {
        const bool explicit_close = detail::closes_trailing_run(c);
        while (produced < count) {
            const std::uint64_t deficit = count - produced;
            if (!explicit_close && in.rest_is_zero()) {
                emit(0, deficit);
                produced = count;
                break;
            }
            const std::uint64_t run = c.decode(in);
            if (explicit_close && run - 1 == deficit) {
                emit(0, deficit);
                produced = count;
                break;
            }
            if (run > deficit) {
                throw CorruptStream("run of " + std::to_string(run) + " symbols overshoots the " +
                                    std::to_string(deficit) + " remaining");
            }
            const std::uint64_t terminator = c.decode(in);
            if (terminator > max_symbol) {
                throw CorruptStream("symbol out of range");
            }
            if (run > 1) {
                emit(0, run - 1);
            }
            emit(terminator, 1);
            produced += run;
        }
    } else {
        throw CorruptStream("unknown mode " + std::to_string(static_cast<unsigned>(stream.mode)));
    }

    const std::size_t end = in.position();
    if (!in.rest_is_zero()) {
        throw CorruptStream("nonzero bits after the last codeword");
    }
    if (stream.payload.bytes().size() != (end + 7) / 8) {
        throw CorruptStream("payload longer than its codewords");
    }
    return end;
}

inline std::vector<std::uint64_t> decode(const EncodedStream& stream) {
    std::vector<std::uint64_t> out;
    walk_payload(stream, [&](std::uint64_t value, std::uint64_t repeat) { out.insert(out.end(), repeat, value); });
    return out;
}

inline std::vector<std::uint64_t> guci_decode(const EncodedStream& stream) {
    if (stream.mode != Mode::guci) {
        throw CorruptStream("stream is not in guci mode");
    }
    return decode(stream);
}

inline std::vector<std::uint64_t> uci_decode_stream(const EncodedStream& stream) {
    if (stream.mode != Mode::uci) {
        throw CorruptStream("stream is not in uci mode");
    }
    return decode(stream);
}

/// Codeword bits in the payload, excluding header and padding.
inline std::size_t payload_bits(const EncodedStream& stream) {
    return walk_payload(stream, [](std::uint64_t, std::uint64_t) {});
}

// ---------------------------------------------------------------------------
// Container serialization.

inline std::vector<std::uint8_t> serialize(const EncodedStream& stream) {
    const UciCode& c = detail::require_codec(code(stream.code));
    std::vector<std::uint8_t> out(container_magic.begin(), container_magic.end());
    out.push_back(*c.container_id);
    out.push_back(static_cast<std::uint8_t>(stream.mode));
    for (int shift = 56; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(stream.symbol_count >> shift));
    }
    const auto payload = stream.payload.bytes();
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

/// Parses a container. The payload keeps every byte; padding is validated on decode.
inline EncodedStream deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < container_header_size) {
        throw CorruptStream("container shorter than its header");
    }
    if (!std::equal(container_magic.begin(), container_magic.end(), bytes.begin())) {
        throw CorruptStream("bad magic");
    }
    EncodedStream out;
    out.code = code_by_container_id(bytes[4]).id;
    if (bytes[5] > static_cast<std::uint8_t>(Mode::uci)) {
        throw CorruptStream("unknown mode " + std::to_string(bytes[5]));
    }
    out.mode = static_cast<Mode>(bytes[5]);
    for (std::size_t k = 6; k < container_header_size; ++k) {
        out.symbol_count = (out.symbol_count << 8) | bytes[k];
    }
    out.payload = BitStream::from_bytes(bytes.subspan(container_header_size));
    return out;
}

}  // namespace guci
