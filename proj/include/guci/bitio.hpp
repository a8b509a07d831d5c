#pragma once

// MSB-first bit streams over byte buffers.
//
// Bit k of a stream lives in byte k / 8 at bit position 7 - k % 8. Bits past
// bit_length() in the last byte are always zero and never carry data.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "guci/error.hpp"

namespace guci {

class BitStream {
public:
    BitStream() = default;

    /// Adopts serialized bytes; every byte is taken as data (bit_length = 8 * size).
    static BitStream from_bytes(std::span<const std::uint8_t> bytes) {
        BitStream s;
        s.bytes_.assign(bytes.begin(), bytes.end());
        s.bit_length_ = bytes.size() * 8;
        return s;
    }

    /// Adopts the first `bit_length` bits of `bytes`. Pad bits must be zero.
    static BitStream from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_length) {
        if ((bit_length + 7) / 8 != bytes.size()) {
            throw InvalidArgument("byte count does not match bit length");
        }
        BitStream s;
        s.bytes_.assign(bytes.begin(), bytes.end());
        s.bit_length_ = bit_length;
        if (bit_length % 8 != 0) {
            const auto pad_mask = static_cast<std::uint8_t>(0xFFu >> (bit_length % 8));
            if ((s.bytes_.back() & pad_mask) != 0) {
                throw CorruptStream("nonzero pad bits");
            }
        }
        return s;
    }

    /// Parses a string of '0'/'1' characters.
    static BitStream from_string(std::string_view bits) {
        BitStream s;
        for (char c : bits) {
            if (c != '0' && c != '1') {
                throw InvalidArgument("bit string may only contain '0' and '1'");
            }
            s.write_bit(c == '1');
        }
        return s;
    }

    void write_bit(bool bit) {
        if (bit_length_ % 8 == 0) {
            bytes_.push_back(0);
        }
        if (bit) {
            bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_length_ % 8));
        }
        ++bit_length_;
    }

    /// Appends the `width` low-order bits of `value`, most significant first.
    void write_bits(std::uint64_t value, unsigned width) {
        if (width == 0 || width > 64) {
            throw InvalidArgument("bit width must be in [1, 64]");
        }
        if (width < 64 && (value >> width) != 0) {
            throw InvalidArgument("value does not fit in " + std::to_string(width) + " bits");
        }
        for (unsigned k = width; k-- > 0;) {
            write_bit(((value >> k) & 1u) != 0);
        }
    }

    void append(const BitStream& other) {
        for (std::size_t k = 0; k < other.bit_length_; ++k) {
            write_bit(other.bit(k));
        }
    }

    [[nodiscard]] bool bit(std::size_t pos) const {
        if (pos >= bit_length_) {
            throw TruncatedInput("bit " + std::to_string(pos) + " of " + std::to_string(bit_length_));
        }
        return ((bytes_[pos / 8] >> (7 - pos % 8)) & 1u) != 0;
    }

    /// Position of the last one bit, scanning backwards from the end.
    [[nodiscard]] std::optional<std::size_t> last_set_bit() const noexcept {
        for (std::size_t b = bytes_.size(); b-- > 0;) {
            if (bytes_[b] != 0) {
                return b * 8 + 7 - static_cast<std::size_t>(std::countr_zero(bytes_[b]));
            }
        }
        return std::nullopt;
    }

    [[nodiscard]] std::size_t bit_length() const noexcept { return bit_length_; }
    [[nodiscard]] bool empty() const noexcept { return bit_length_ == 0; }
    [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

    [[nodiscard]] std::string to_string() const {
        std::string out;
        out.reserve(bit_length_);
        for (std::size_t k = 0; k < bit_length_; ++k) {
            out.push_back(bit(k) ? '1' : '0');
        }
        return out;
    }

    friend bool operator==(const BitStream&, const BitStream&) = default;

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bit_length_ = 0;
};

/// Sequential cursor over a BitStream. The stream must outlive the reader.
class BitReader {
public:
    explicit BitReader(const BitStream& stream, std::size_t cursor = 0) : stream_(&stream), cursor_(cursor) {}

    bool read_bit() {
        if (cursor_ >= stream_->bit_length()) {
            throw TruncatedInput("read past end of stream at bit " + std::to_string(cursor_));
        }
        return stream_->bit(cursor_++);
    }

    std::uint64_t read_bits(unsigned width) {
        if (width > 64) {
            throw InvalidArgument("bit width must be at most 64");
        }
        if (remaining() < width) {
            throw TruncatedInput("need " + std::to_string(width) + " bits, " + std::to_string(remaining()) +
                                 " left");
        }
        std::uint64_t v = 0;
        for (unsigned k = 0; k < width; ++k) {
            v = (v << 1) | static_cast<std::uint64_t>(stream_->bit(cursor_++));
        }
        return v;
    }

    [[nodiscard]] std::size_t position() const noexcept { return cursor_; }
    [[nodiscard]] std::size_t remaining() const noexcept { return stream_->bit_length() - cursor_; }
    [[nodiscard]] bool at_end() const noexcept { return cursor_ >= stream_->bit_length(); }

    /// True when every bit from the cursor to the end of the stream is zero.
    [[nodiscard]] bool rest_is_zero() const {
        const auto last = stream_->last_set_bit();
        return !last || *last < cursor_;
    }

private:
    const BitStream* stream_;
    std::size_t cursor_;
};

}  // namespace guci
