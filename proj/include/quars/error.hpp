#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace quars {

enum class error_kind {
    invalid_input,
    overflow,
    corrupt_data,
    value_too_large,
    magic_mismatch,
    unsupported_version,
    io,
};

inline const char* to_string(error_kind kind) noexcept {
    switch (kind) {
    case error_kind::invalid_input: return "InvalidInput";
    case error_kind::overflow: return "Overflow";
    case error_kind::corrupt_data: return "CorruptData";
    case error_kind::value_too_large: return "ValueTooLarge";
    case error_kind::magic_mismatch: return "MagicMismatch";
    case error_kind::unsupported_version: return "UnsupportedVersion";
    case error_kind::io: return "IoError";
    }
    return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class error : public std::runtime_error {
public:
    error(error_kind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

[[noreturn]] inline void fail(error_kind kind, const std::string& message) {
    throw error(kind, message);
}

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        fail(error_kind::overflow, "signed 64-bit addition overflows");
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        fail(error_kind::overflow, "signed 64-bit subtraction overflows");
    return r;
}

}  // namespace detail
}  // namespace quars
