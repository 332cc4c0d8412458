#pragma once

// Dataset files. Text: one signed decimal integer per LF-terminated line (a
// missing final LF is accepted; output always ends with LF). Binary:
// densely packed little-endian 64-bit two's complement.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quars/error.hpp"

namespace quars {

enum class dataset_format {
    text,
    binary,
};

inline std::vector<std::int64_t> parse_text_dataset(std::string_view text) {
    std::vector<std::int64_t> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        ++line_no;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (line.empty() || ec != std::errc{} || ptr != line.data() + line.size()) {
            const auto what = ec == std::errc::result_out_of_range ? "integer out of signed 64-bit range"
                                                                   : "not a decimal integer";
            fail(error_kind::invalid_input,
                 "line " + std::to_string(line_no) + ": " + what + " '" + std::string(line.substr(0, 40)) + "'");
        }
        out.push_back(v);
        pos = end + 1;
    }
    return out;
}

inline std::string format_text_dataset(std::span<const std::int64_t> data) {
    std::string out;
    out.reserve(data.size() * 4);
    char buf[24];
    for (std::int64_t v : data) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, ptr);
        out.push_back('\n');
    }
    return out;
}

inline std::vector<std::int64_t> parse_binary_dataset(std::span<const std::uint8_t> bytes) {
    if (bytes.size() % 8 != 0)
        fail(error_kind::invalid_input,
             "binary dataset size " + std::to_string(bytes.size()) + " is not a multiple of 8 bytes");
    std::vector<std::int64_t> out(bytes.size() / 8);
    for (std::size_t j = 0; j < out.size(); ++j) {
        std::uint64_t u = 0;
        for (unsigned b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(bytes[8 * j + b]) << (8 * b);
        out[j] = static_cast<std::int64_t>(u);
    }
    return out;
}

inline std::vector<std::uint8_t> format_binary_dataset(std::span<const std::int64_t> data) {
    std::vector<std::uint8_t> out;
    out.reserve(data.size() * 8);
    for (std::int64_t v : data) {
        const auto u = static_cast<std::uint64_t>(v);
        for (unsigned b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
    }
    return out;
}

inline std::vector<std::int64_t> parse_dataset(std::span<const std::uint8_t> bytes, dataset_format format) {
    if (format == dataset_format::binary) return parse_binary_dataset(bytes);
    return parse_text_dataset({reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

inline std::vector<std::uint8_t> format_dataset(std::span<const std::int64_t> data, dataset_format format) {
    if (format == dataset_format::binary) return format_binary_dataset(data);
    const auto text = format_text_dataset(data);
    return {text.begin(), text.end()};
}

}  // namespace quars
