#pragma once

// Integer codes that spend fewer bits on smaller values. Signed data reaches
// the unsigned codes only through zigzag_map.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quars/bitstream.hpp"
#include "quars/error.hpp"

namespace quars {

constexpr std::uint64_t zigzag_map(std::int64_t v) noexcept {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

constexpr std::int64_t zigzag_unmap(std::uint64_t u) noexcept {
    return static_cast<std::int64_t>((u >> 1) ^ (~(u & 1) + 1));
}

/* varint: little-endian 7-bit groups, high bit set on all but the last byte */

constexpr std::size_t varint_length(std::uint64_t u) noexcept {
    std::size_t n = 1;
    while (u >= 0x80) {
        u >>= 7;
        ++n;
    }
    return n;
}

inline void varint_encode(std::uint64_t u, std::vector<std::uint8_t>& out) {
    while (u >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(u | 0x80));
        u >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(u));
}

/// Reads one varint at `pos` and advances it. Rejects truncated, overlong
/// (more than 10 bytes or bits beyond 64) and non-minimal encodings.
inline std::uint64_t varint_decode(std::span<const std::uint8_t> in, std::size_t& pos) {
    std::uint64_t value = 0;
    for (unsigned i = 0; i < 10; ++i) {
        if (pos >= in.size()) fail(error_kind::corrupt_data, "varint truncated");
        const std::uint8_t byte = in[pos++];
        if (i == 9 && byte > 1) fail(error_kind::corrupt_data, "varint exceeds 64 bits");
        value |= static_cast<std::uint64_t>(byte & 0x7f) << (7 * i);
        if ((byte & 0x80) == 0) {
            if (byte == 0 && i > 0) fail(error_kind::corrupt_data, "varint is not minimally encoded");
            return value;
        }
    }
    fail(error_kind::corrupt_data, "varint longer than 10 bytes");
}

/* Rice: quotient u >> k in unary (ones, then a zero), then the k low bits */

inline constexpr std::uint64_t rice_quotient_limit = std::uint64_t{1} << 24;
inline constexpr unsigned rice_max_k = 63;
inline constexpr unsigned rice_pick_max_k = 32;

constexpr std::uint64_t rice_length(std::uint64_t u, unsigned k) noexcept { return (u >> k) + 1 + k; }

inline void rice_encode(std::uint64_t u, unsigned k, bit_writer& out) {
    if (k > rice_max_k) fail(error_kind::invalid_input, "rice parameter must be in [0, 63]");
    const std::uint64_t quotient = u >> k;
    if (quotient >= rice_quotient_limit)
        fail(error_kind::value_too_large, "rice quotient " + std::to_string(quotient) + " exceeds 2^24");
    out.write_run(true, quotient);
    out.write_bit(false);
    out.write_bits(u, k);
}

inline std::uint64_t rice_decode(unsigned k, bit_reader& in) {
    if (k > rice_max_k) fail(error_kind::invalid_input, "rice parameter must be in [0, 63]");
    const std::uint64_t quotient = in.skip_run(true, rice_quotient_limit);
    if (quotient >= rice_quotient_limit) fail(error_kind::corrupt_data, "rice unary run exceeds 2^24");
    in.read_bit();  // terminating zero
    return (quotient << k) | in.read_bits(k);
}

/// k in [0, 32] with the smallest total coded length; ties go to the smaller k.
/// Parameters that would exceed the quotient limit for some value are skipped.
inline unsigned rice_pick_k(std::span<const std::uint64_t> values) {
    unsigned best_k = rice_pick_max_k;
    unsigned __int128 best_cost = ~static_cast<unsigned __int128>(0);
    for (unsigned k = 0; k <= rice_pick_max_k; ++k) {
        unsigned __int128 cost = 0;
        bool feasible = true;
        for (std::uint64_t u : values) {
            if ((u >> k) >= rice_quotient_limit) {
                feasible = false;
                break;
            }
            cost += rice_length(u, k);
        }
        if (feasible && cost < best_cost) {
            best_cost = cost;
            best_k = k;
        }
    }
    return best_k;
}

/* Elias gamma of u + 1: floor(log2(u + 1)) zeros, then u + 1 in binary */

constexpr std::uint64_t gamma_length(std::uint64_t u) noexcept {
    if (u == std::numeric_limits<std::uint64_t>::max()) return 129;
    return 2 * static_cast<std::uint64_t>(std::bit_width(u + 1) - 1) + 1;
}

inline void gamma_encode(std::uint64_t u, bit_writer& out) {
    if (u == std::numeric_limits<std::uint64_t>::max()) {
        // u + 1 = 2^64 needs 65 significant bits
        out.write_run(false, 64);
        out.write_bit(true);
        out.write_run(false, 64);
        return;
    }
    const std::uint64_t v = u + 1;
    const unsigned length = static_cast<unsigned>(std::bit_width(v) - 1);
    out.write_run(false, length);
    out.write_bits(v, length + 1);
}

inline std::uint64_t gamma_decode(bit_reader& in) {
    const auto zeros = static_cast<unsigned>(in.skip_run(false, 65));
    if (zeros > 64) fail(error_kind::corrupt_data, "gamma prefix longer than 64 bits");
    in.read_bit();  // leading one of u + 1
    if (zeros == 64) {
        if (in.read_bits(64) != 0) fail(error_kind::corrupt_data, "gamma value exceeds 64 bits");
        return std::numeric_limits<std::uint64_t>::max();
    }
    const std::uint64_t v = (std::uint64_t{1} << zeros) | in.read_bits(zeros);
    return v - 1;
}

/* delta preprocessing */

inline std::vector<std::int64_t> delta_transform(std::span<const std::int64_t> data) {
    if (data.empty()) fail(error_kind::invalid_input, "dataset must contain at least one value");
    std::vector<std::int64_t> out(data.size());
    out[0] = data[0];
    for (std::size_t j = 1; j < data.size(); ++j) out[j] = detail::checked_sub(data[j], data[j - 1]);
    return out;
}

inline std::vector<std::int64_t> delta_inverse(std::span<const std::int64_t> deltas) {
    if (deltas.empty()) fail(error_kind::invalid_input, "dataset must contain at least one value");
    std::vector<std::int64_t> out(deltas.size());
    out[0] = deltas[0];
    for (std::size_t j = 1; j < deltas.size(); ++j) out[j] = detail::checked_add(out[j - 1], deltas[j]);
    return out;
}

/* codec dispatch over whole sequences */

enum class codec_kind : std::uint8_t {
    raw64 = 0,
    varint = 1,
    rice = 2,
    elias_gamma = 3,
};

struct codec_id {
    codec_kind kind = codec_kind::rice;
    std::uint8_t rice_k = 0;

    friend bool operator==(const codec_id&, const codec_id&) = default;
};

inline std::string_view codec_name(codec_kind kind) noexcept {
    switch (kind) {
    case codec_kind::raw64: return "raw64";
    case codec_kind::varint: return "varint";
    case codec_kind::rice: return "rice";
    case codec_kind::elias_gamma: return "gamma";
    }
    return "unknown";
}

inline std::optional<codec_kind> parse_codec_name(std::string_view name) noexcept {
    if (name == "raw64") return codec_kind::raw64;
    if (name == "varint") return codec_kind::varint;
    if (name == "rice") return codec_kind::rice;
    if (name == "gamma" || name == "elias_gamma") return codec_kind::elias_gamma;
    return std::nullopt;
}

inline std::vector<std::uint64_t> zigzag_all(std::span<const std::int64_t> values) {
    std::vector<std::uint64_t> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) out[j] = zigzag_map(values[j]);
    return out;
}

/// Picks rice k from the data when `kind` is rice and no k is given.
inline codec_id resolve_codec(codec_kind kind, std::optional<unsigned> rice_k,
                              std::span<const std::int64_t> values) {
    if (kind != codec_kind::rice) return {kind, 0};
    if (rice_k) {
        if (*rice_k > rice_max_k) fail(error_kind::invalid_input, "rice parameter must be in [0, 63]");
        return {kind, static_cast<std::uint8_t>(*rice_k)};
    }
    const auto zz = zigzag_all(values);
    return {kind, static_cast<std::uint8_t>(rice_pick_k(zz))};
}

/// Exact payload size in bits before byte padding. raw64 stores the signed
/// two's complement values; the other codes see zigzag-mapped values.
inline std::uint64_t coded_bits(std::span<const std::int64_t> values, codec_id codec) {
    unsigned __int128 bits = 0;
    switch (codec.kind) {
    case codec_kind::raw64: bits = static_cast<unsigned __int128>(values.size()) * 64; break;
    case codec_kind::varint:
        for (auto v : values) bits += 8 * varint_length(zigzag_map(v));
        break;
    case codec_kind::rice:
        for (auto v : values) {
            const auto u = zigzag_map(v);
            if ((u >> codec.rice_k) >= rice_quotient_limit)
                fail(error_kind::value_too_large, "rice quotient exceeds 2^24");
            bits += rice_length(u, codec.rice_k);
        }
        break;
    case codec_kind::elias_gamma:
        for (auto v : values) bits += gamma_length(zigzag_map(v));
        break;
    }
    if (bits > std::numeric_limits<std::uint64_t>::max()) fail(error_kind::overflow, "coded size exceeds 2^64 bits");
    return static_cast<std::uint64_t>(bits);
}

inline std::vector<std::uint8_t> encode_payload(std::span<const std::int64_t> values, codec_id codec) {
    std::vector<std::uint8_t> out;
    switch (codec.kind) {
    case codec_kind::raw64:
        out.reserve(values.size() * 8);
        for (auto v : values) {
            const auto u = static_cast<std::uint64_t>(v);
            for (unsigned b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
        }
        return out;
    case codec_kind::varint:
        for (auto v : values) varint_encode(zigzag_map(v), out);
        return out;
    case codec_kind::rice: {
        bit_writer writer;
        for (auto v : values) rice_encode(zigzag_map(v), codec.rice_k, writer);
        return std::move(writer).take_bytes();
    }
    case codec_kind::elias_gamma: {
        bit_writer writer;
        for (auto v : values) gamma_encode(zigzag_map(v), writer);
        return std::move(writer).take_bytes();
    }
    }
    fail(error_kind::invalid_input, "unknown codec");
}

/// Decodes exactly `count` values and requires the payload to be fully
/// consumed (bit codes may leave fewer than 8 zero pad bits).
inline std::vector<std::int64_t> decode_payload(std::span<const std::uint8_t> payload, codec_id codec,
                                                std::uint64_t count) {
    std::vector<std::int64_t> out;
    switch (codec.kind) {
    case codec_kind::raw64: {
        if (payload.size() / 8 != count || payload.size() % 8 != 0)
            fail(error_kind::corrupt_data, "raw64 payload size does not match value count");
        out.resize(static_cast<std::size_t>(count));
        for (std::size_t j = 0; j < out.size(); ++j) {
            std::uint64_t u = 0;
            for (unsigned b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(payload[8 * j + b]) << (8 * b);
            out[j] = static_cast<std::int64_t>(u);
        }
        return out;
    }
    case codec_kind::varint: {
        if (count > payload.size()) fail(error_kind::corrupt_data, "varint payload shorter than value count");
        out.reserve(static_cast<std::size_t>(count));
        std::size_t pos = 0;
        for (std::uint64_t j = 0; j < count; ++j) out.push_back(zigzag_unmap(varint_decode(payload, pos)));
        if (pos != payload.size()) fail(error_kind::corrupt_data, "trailing bytes after varint payload");
        return out;
    }
    case codec_kind::rice:
    case codec_kind::elias_gamma: {
        if (count > static_cast<std::uint64_t>(payload.size()) * 8)
            fail(error_kind::corrupt_data, "bit payload shorter than value count");
        if (codec.kind == codec_kind::rice && codec.rice_k > rice_max_k)
            fail(error_kind::corrupt_data, "rice parameter out of range");
        out.reserve(static_cast<std::size_t>(count));
        bit_reader reader(payload);
        for (std::uint64_t j = 0; j < count; ++j) {
            const auto u = codec.kind == codec_kind::rice ? rice_decode(codec.rice_k, reader) : gamma_decode(reader);
            out.push_back(zigzag_unmap(u));
        }
        if (reader.remaining() >= 8) fail(error_kind::corrupt_data, "trailing bytes after bit payload");
        if (reader.remaining() > 0 && reader.read_bits(static_cast<unsigned>(reader.remaining())) != 0)
            fail(error_kind::corrupt_data, "nonzero pad bits after bit payload");
        return out;
    }
    }
    fail(error_kind::corrupt_data, "unknown codec");
}

}  // namespace quars
