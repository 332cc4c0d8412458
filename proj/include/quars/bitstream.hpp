#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "quars/error.hpp"

namespace quars {

/// MSB-first bit builder. Pad bits in the last byte stay zero.
class bit_writer {
public:
    void write_bit(bool bit) {
        if (bit_length_ % 8 == 0) bytes_.push_back(0);
        if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_length_ % 8));
        ++bit_length_;
    }

    /// Writes the low `count` (<= 64) bits of `value`, most significant first.
    void write_bits(std::uint64_t value, unsigned count) {
        while (count > 0) {
            if (bit_length_ % 8 == 0) bytes_.push_back(0);
            const unsigned free = 8 - static_cast<unsigned>(bit_length_ % 8);
            const unsigned take = count < free ? count : free;
            const auto chunk = static_cast<unsigned>((value >> (count - take)) & ((1u << take) - 1));
            bytes_.back() |= static_cast<std::uint8_t>(chunk << (free - take));
            count -= take;
            bit_length_ += take;
        }
    }

    void write_run(bool bit, std::uint64_t count) {
        if (!bit) {
            bit_length_ += count;
            bytes_.resize(static_cast<std::size_t>((bit_length_ + 7) / 8), 0);
            return;
        }
        for (; count >= 64; count -= 64) write_bits(~std::uint64_t{0}, 64);
        write_bits(~std::uint64_t{0}, static_cast<unsigned>(count));
    }

    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
    std::vector<std::uint8_t> take_bytes() && { return std::move(bytes_); }
    std::uint64_t bit_length() const noexcept { return bit_length_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t bit_length_ = 0;
};

class bit_reader {
public:
    explicit bit_reader(std::span<const std::uint8_t> bytes)
        : bytes_(bytes), bit_length_(static_cast<std::uint64_t>(bytes.size()) * 8) {}

    bit_reader(std::span<const std::uint8_t> bytes, std::uint64_t bit_length)
        : bytes_(bytes), bit_length_(bit_length) {
        if (bit_length > static_cast<std::uint64_t>(bytes.size()) * 8)
            fail(error_kind::invalid_input, "bit length exceeds buffer size");
    }

    bool read_bit() {
        if (position_ >= bit_length_) fail(error_kind::corrupt_data, "bit stream truncated");
        const bool bit = (bytes_[position_ / 8] >> (7 - position_ % 8)) & 1u;
        ++position_;
        return bit;
    }

    /// Reads `count` (<= 64) bits, most significant first.
    std::uint64_t read_bits(unsigned count) {
        if (count > remaining()) fail(error_kind::corrupt_data, "bit stream truncated");
        std::uint64_t value = 0;
        while (count > 0) {
            const unsigned offset = static_cast<unsigned>(position_ % 8);
            const unsigned avail = 8 - offset;
            const unsigned take = count < avail ? count : avail;
            const unsigned byte = bytes_[static_cast<std::size_t>(position_ / 8)];
            const unsigned chunk = (byte >> (avail - take)) & ((1u << take) - 1);
            value = (value << take) | chunk;
            count -= take;
            position_ += take;
        }
        return value;
    }

    /// Consumes consecutive `bit`s up to `limit` of them and returns how many
    /// were read. Stops before the first differing bit.
    std::uint64_t skip_run(bool bit, std::uint64_t limit) {
        const std::uint8_t full = bit ? 0xFF : 0x00;
        std::uint64_t run = 0;
        while (run < limit) {
            if (position_ >= bit_length_) fail(error_kind::corrupt_data, "bit stream truncated");
            if (position_ % 8 == 0 && bit_length_ - position_ >= 8 && limit - run >= 8 &&
                bytes_[static_cast<std::size_t>(position_ / 8)] == full) {
                position_ += 8;
                run += 8;
                continue;
            }
            const bool b = (bytes_[static_cast<std::size_t>(position_ / 8)] >> (7 - position_ % 8)) & 1u;
            if (b != bit) break;
            ++position_;
            ++run;
        }
        return run;
    }

    std::uint64_t position() const noexcept { return position_; }
    std::uint64_t remaining() const noexcept { return bit_length_ - position_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::uint64_t bit_length_;
    std::uint64_t position_ = 0;
};

}  // namespace quars
