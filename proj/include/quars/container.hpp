#pragma once

// Self-describing file wrapper. Layout (see FORMAT.md):
//   "QRS1" | version u8 | flags u8 | codec u8 | rice_k u8
//   | varint q | varint n_values | varint bin_count
//   | bin_count zigzag varints (left bounds, placement order) | zigzag varint upper bound
//   | payload

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "quars/codecs.hpp"
#include "quars/error.hpp"
#include "quars/transform.hpp"

namespace quars {

inline constexpr std::array<std::uint8_t, 4> container_magic{'Q', 'R', 'S', '1'};
inline constexpr std::uint8_t container_version = 1;

enum container_flags : std::uint8_t {
    flag_quars = 0x01,
    flag_delta = 0x02,
};

struct write_options {
    std::uint64_t q = 16;
    codec_kind codec = codec_kind::rice;
    std::optional<unsigned> rice_k;  // rice only; picked from the data when empty
    bool apply_quars = true;
    bool use_delta = false;
};

struct container_header {
    std::uint8_t version = container_version;
    std::uint8_t flags = 0;
    codec_id codec;
    std::uint64_t q = 0;
    std::uint64_t n_values = 0;
    std::uint64_t bin_count = 0;

    bool quars_applied() const noexcept { return flags & flag_quars; }
    bool delta_applied() const noexcept { return flags & flag_delta; }
};

struct container_contents {
    container_header header;
    shuffle_metadata metadata;  // empty when QuaRs was not applied
    std::vector<std::int64_t> values;
};

inline std::vector<std::uint8_t> write_container(std::span<const std::int64_t> data, const write_options& options) {
    detail::require_nonempty(data);
    if (options.apply_quars && options.q == 0)
        fail(error_kind::invalid_input, "number of quantiles must be at least 1");

    std::vector<std::int64_t> stage(data.begin(), data.end());
    if (options.use_delta) stage = delta_transform(stage);

    shuffle_metadata meta;
    if (options.apply_quars) {
        auto encoded = encode(stage, options.q);
        meta = std::move(encoded.metadata);
        stage = std::move(encoded.values);
    }
    const codec_id codec = resolve_codec(options.codec, options.rice_k, stage);

    std::vector<std::uint8_t> out(container_magic.begin(), container_magic.end());
    out.push_back(container_version);
    out.push_back(static_cast<std::uint8_t>((options.apply_quars ? flag_quars : 0) |
                                            (options.use_delta ? flag_delta : 0)));
    out.push_back(static_cast<std::uint8_t>(codec.kind));
    out.push_back(codec.rice_k);
    varint_encode(options.apply_quars ? options.q : 0, out);
    varint_encode(stage.size(), out);
    varint_encode(meta.shuffled_left_bounds.size(), out);
    if (options.apply_quars) {
        for (auto b : meta.shuffled_left_bounds) varint_encode(zigzag_map(b), out);
        varint_encode(zigzag_map(meta.global_upper_bound), out);
    }
    const auto payload = encode_payload(stage, codec);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

inline std::size_t write_container(std::span<const std::int64_t> data, const write_options& options,
                                   std::ostream& sink) {
    const auto bytes = write_container(data, options);
    sink.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!sink) fail(error_kind::io, "failed to write container");
    return bytes.size();
}

/// Parses header and bins and decodes the payload. `values` holds the
/// fully restored dataset.
inline container_contents parse_container(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8) {
        if (bytes.size() >= 4 && !std::equal(container_magic.begin(), container_magic.end(), bytes.begin()))
            fail(error_kind::magic_mismatch, "not a QRS1 container");
        fail(error_kind::corrupt_data, "container header truncated");
    }
    if (!std::equal(container_magic.begin(), container_magic.end(), bytes.begin()))
        fail(error_kind::magic_mismatch, "not a QRS1 container");

    container_contents c;
    auto& h = c.header;
    h.version = bytes[4];
    if (h.version != container_version)
        fail(error_kind::unsupported_version, "container version " + std::to_string(h.version));
    h.flags = bytes[5];
    if (h.flags & ~static_cast<std::uint8_t>(flag_quars | flag_delta))
        fail(error_kind::corrupt_data, "unknown flag bits set");
    if (bytes[6] > static_cast<std::uint8_t>(codec_kind::elias_gamma))
        fail(error_kind::corrupt_data, "unknown codec id " + std::to_string(bytes[6]));
    h.codec.kind = static_cast<codec_kind>(bytes[6]);
    h.codec.rice_k = bytes[7];
    if (h.codec.kind != codec_kind::rice && h.codec.rice_k != 0)
        fail(error_kind::corrupt_data, "rice parameter set for a non-rice codec");
    if (h.codec.rice_k > rice_max_k) fail(error_kind::corrupt_data, "rice parameter out of range");

    std::size_t pos = 8;
    h.q = varint_decode(bytes, pos);
    h.n_values = varint_decode(bytes, pos);
    h.bin_count = varint_decode(bytes, pos);
    if (h.n_values == 0) fail(error_kind::corrupt_data, "container holds no values");
    if (h.quars_applied()) {
        if (h.q == 0) fail(error_kind::corrupt_data, "quantile count is zero");
        if (h.bin_count == 0 || h.bin_count - 1 > h.q)
            fail(error_kind::corrupt_data, "bin count outside [1, q+1]");
        // every varint takes at least one byte
        if (h.bin_count >= bytes.size() - pos) fail(error_kind::corrupt_data, "bin list truncated");
        c.metadata.shuffled_left_bounds.reserve(static_cast<std::size_t>(h.bin_count));
        for (std::uint64_t k = 0; k < h.bin_count; ++k)
            c.metadata.shuffled_left_bounds.push_back(zigzag_unmap(varint_decode(bytes, pos)));
        c.metadata.global_upper_bound = zigzag_unmap(varint_decode(bytes, pos));
        original_boundaries(c.metadata);  // throws corrupt_data on invalid bins
    } else if (h.q != 0 || h.bin_count != 0) {
        fail(error_kind::corrupt_data, "bins present without the QuaRs flag");
    }

    auto values = decode_payload(bytes.subspan(pos), h.codec, h.n_values);
    if (h.quars_applied()) values = decode(values, c.metadata);
    if (h.delta_applied()) {
        try {
            values = delta_inverse(values);
        } catch (const error& e) {
            if (e.kind() != error_kind::overflow) throw;
            fail(error_kind::corrupt_data, "delta prefix sum overflows");
        }
    }
    c.values = std::move(values);
    return c;
}

inline std::vector<std::int64_t> read_container(std::span<const std::uint8_t> bytes) {
    return parse_container(bytes).values;
}

inline std::vector<std::int64_t> read_container(std::istream& source) {
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
    if (source.bad()) fail(error_kind::io, "failed to read container");
    return read_container(bytes);
}

}  // namespace quars
