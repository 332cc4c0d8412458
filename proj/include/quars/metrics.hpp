#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "quars/codecs.hpp"
#include "quars/error.hpp"

namespace quars {

/// Exact numerator / denominator, printed with a fixed number of decimals.
struct exact_ratio {
    unsigned __int128 numerator = 0;
    std::uint64_t denominator = 1;

    double value() const noexcept { return static_cast<double>(numerator) / static_cast<double>(denominator); }

    /// Rounded half up to six fractional digits.
    std::string to_decimal() const {
        unsigned __int128 whole = numerator / denominator;
        const auto rem = static_cast<unsigned __int128>(numerator % denominator);
        auto frac = (rem * 2'000'000 + denominator) / (static_cast<unsigned __int128>(denominator) * 2);
        if (frac == 1'000'000) {
            ++whole;
            frac = 0;
        }
        std::string digits;
        do {
            digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
            whole /= 10;
        } while (whole != 0);
        char buf[8];
        std::snprintf(buf, sizeof buf, ".%06u", static_cast<unsigned>(frac));
        return digits + buf;
    }

    friend bool operator<(const exact_ratio& a, const exact_ratio& b) noexcept {
        // whole parts first, then remainders cross-multiplied (each product < 2^128)
        const auto lhs_whole = a.numerator / a.denominator, rhs_whole = b.numerator / b.denominator;
        if (lhs_whole != rhs_whole) return lhs_whole < rhs_whole;
        const auto lhs_rem = static_cast<unsigned __int128>(a.numerator % a.denominator) * b.denominator;
        const auto rhs_rem = static_cast<unsigned __int128>(b.numerator % b.denominator) * a.denominator;
        return lhs_rem < rhs_rem;
    }
    friend bool operator==(const exact_ratio& a, const exact_ratio& b) noexcept { return !(a < b) && !(b < a); }
};

inline exact_ratio mean_abs(std::span<const std::int64_t> data) {
    if (data.empty()) fail(error_kind::invalid_input, "dataset must contain at least one value");
    unsigned __int128 sum = 0;
    for (std::int64_t d : data) {
        const auto u = static_cast<std::uint64_t>(d);
        sum += d < 0 ? ~u + 1 : u;
    }
    return {sum, static_cast<std::uint64_t>(data.size())};
}

/// Shannon entropy of the empirical value distribution, bits per symbol.
/// Counts are summed in sorted order so the result depends only on the
/// multiset of frequencies.
inline double entropy_order0(std::span<const std::int64_t> data) {
    if (data.empty()) fail(error_kind::invalid_input, "dataset must contain at least one value");
    std::unordered_map<std::int64_t, std::uint64_t> freq;
    for (std::int64_t d : data) ++freq[d];
    if (freq.size() == 1) return 0.0;

    std::vector<std::uint64_t> counts;
    counts.reserve(freq.size());
    for (const auto& [value, count] : freq) counts.push_back(count);
    std::sort(counts.begin(), counts.end());

    const auto n = static_cast<long double>(data.size());
    long double weighted = 0.0L;
    for (std::uint64_t c : counts) weighted += static_cast<long double>(c) * std::log2(static_cast<long double>(c));
    const long double h = std::log2(n) - weighted / n;
    return h < 0.0L ? 0.0 : static_cast<double>(h);
}

inline std::string format_fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

struct histogram_row {
    std::int64_t lower;  // inclusive
    std::int64_t upper;  // exclusive
    std::uint64_t count;

    friend bool operator==(const histogram_row&, const histogram_row&) = default;
};

inline constexpr std::uint64_t histogram_max_rows = std::uint64_t{1} << 24;

/// Dense fixed-width rows aligned to multiples of `bin_width`, from the row
/// holding min(data) to the row holding max(data).
inline std::vector<histogram_row> histogram(std::span<const std::int64_t> data, std::uint64_t bin_width) {
    if (data.empty()) fail(error_kind::invalid_input, "dataset must contain at least one value");
    if (bin_width == 0) fail(error_kind::invalid_input, "histogram bin width must be positive");

    const auto [min_it, max_it] = std::minmax_element(data.begin(), data.end());
    const __int128 w = bin_width;
    auto floor_div = [](__int128 a, __int128 b) { return a / b - ((a % b != 0) && (a < 0)); };
    const __int128 first = floor_div(*min_it, w);
    const __int128 last = floor_div(*max_it, w);
    const __int128 rows = last - first + 1;
    if (rows > static_cast<__int128>(histogram_max_rows))
        fail(error_kind::invalid_input, "histogram would need more than 2^24 rows; use a wider bin");

    const __int128 top = (last + 1) * w;
    if (top > std::numeric_limits<std::int64_t>::max())
        fail(error_kind::overflow, "histogram upper edge exceeds signed 64-bit range");

    std::vector<histogram_row> out(static_cast<std::size_t>(rows));
    for (std::size_t r = 0; r < out.size(); ++r) {
        const __int128 lo = (first + static_cast<__int128>(r)) * w;
        out[r] = {static_cast<std::int64_t>(lo), static_cast<std::int64_t>(lo + w), 0};
    }
    for (std::int64_t d : data) ++out[static_cast<std::size_t>(floor_div(d, w) - first)].count;
    return out;
}

/// Peaks in the row counts; a flat top counts once.
inline std::size_t count_local_maxima(std::span<const histogram_row> rows) {
    std::size_t peaks = 0;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        while (j + 1 < rows.size() && rows[j + 1].count == rows[i].count) ++j;
        const std::uint64_t left = i == 0 ? 0 : rows[i - 1].count;
        const std::uint64_t right = j + 1 == rows.size() ? 0 : rows[j + 1].count;
        if (rows[i].count > left && rows[i].count > right) ++peaks;
        i = j + 1;
    }
    return peaks;
}

struct value_interval {
    std::int64_t lower;  // inclusive
    std::int64_t upper;  // inclusive

    unsigned __int128 width() const noexcept {
        return static_cast<unsigned __int128>(static_cast<__int128>(upper) - lower) + 1;
    }
    bool contains(std::int64_t v) const noexcept { return lower <= v && v <= upper; }
};

/// Narrowest closed interval holding at least ceil(fraction * N) values;
/// the leftmost one on ties.
inline value_interval mass_interval(std::span<const std::int64_t> data, double fraction) {
    if (data.empty()) fail(error_kind::invalid_input, "dataset must contain at least one value");
    if (!(fraction > 0.0 && fraction <= 1.0)) fail(error_kind::invalid_input, "fraction must be in (0, 1]");
    std::vector<std::int64_t> s(data.begin(), data.end());
    std::sort(s.begin(), s.end());
    auto m = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(s.size())));
    m = std::clamp<std::size_t>(m, 1, s.size());

    value_interval best{s[0], s[m - 1]};
    for (std::size_t i = 1; i + m <= s.size(); ++i) {
        const value_interval candidate{s[i], s[i + m - 1]};
        if (candidate.width() < best.width()) best = candidate;
    }
    return best;
}

/// Payload bits after zigzag and the given code, without container overhead.
inline std::uint64_t coded_size(std::span<const std::int64_t> data, codec_id codec) {
    if (data.empty()) fail(error_kind::invalid_input, "dataset must contain at least one value");
    return coded_bits(data, codec);
}

/// Rice size at the k that rice_pick_k chooses for this data.
inline std::uint64_t coded_size_rice_auto(std::span<const std::int64_t> data) {
    return coded_size(data, resolve_codec(codec_kind::rice, std::nullopt, data));
}

struct codec_size {
    codec_id codec;
    std::uint64_t bits;
};

struct metrics_report {
    std::uint64_t n = 0;
    std::int64_t min = 0;
    std::int64_t max = 0;
    exact_ratio mean_abs;
    double entropy_order0_bits = 0.0;
    std::vector<histogram_row> histogram;
    std::vector<codec_size> coded_bits;
};

/// Rice sizes over values whose quotient overflows every k are skipped.
inline metrics_report make_report(std::span<const std::int64_t> data, std::uint64_t bin_width) {
    metrics_report r;
    r.n = data.size();
    const auto [min_it, max_it] = std::minmax_element(data.begin(), data.end());
    r.min = *min_it;
    r.max = *max_it;
    r.mean_abs = quars::mean_abs(data);
    r.entropy_order0_bits = entropy_order0(data);
    r.histogram = quars::histogram(data, bin_width);
    for (auto kind : {codec_kind::raw64, codec_kind::varint, codec_kind::rice, codec_kind::elias_gamma}) {
        try {
            const auto codec = resolve_codec(kind, std::nullopt, data);
            r.coded_bits.push_back({codec, coded_size(data, codec)});
        } catch (const error& e) {
            if (e.kind() != error_kind::value_too_large) throw;
        }
    }
    return r;
}

/// A width giving roughly `target_rows` rows over the data range.
inline std::uint64_t auto_bin_width(std::span<const std::int64_t> data, std::uint64_t target_rows = 64) {
    if (data.empty()) fail(error_kind::invalid_input, "dataset must contain at least one value");
    const auto [min_it, max_it] = std::minmax_element(data.begin(), data.end());
    const auto range = static_cast<unsigned __int128>(static_cast<__int128>(*max_it) - *min_it) + 1;
    const auto w = (range + target_rows - 1) / target_rows;
    return w == 0 ? 1 : static_cast<std::uint64_t>(w);
}

inline void write_histogram_csv(std::ostream& out, std::span<const histogram_row> rows) {
    out << "bin_lower,bin_upper,count\n";
    for (const auto& r : rows) out << r.lower << ',' << r.upper << ',' << r.count << '\n';
}

inline void write_metrics_csv_header(std::ostream& out) {
    out << "label,n,min,max,mean_abs,entropy_bits,codec,rice_k,coded_bits\n";
}

/// One row per codec measured in the report.
inline void write_metrics_csv_rows(std::ostream& out, std::string_view label, const metrics_report& r) {
    for (const auto& c : r.coded_bits) {
        out << label << ',' << r.n << ',' << r.min << ',' << r.max << ',' << r.mean_abs.to_decimal() << ','
            << format_fixed6(r.entropy_order0_bits) << ',' << codec_name(c.codec.kind) << ','
            << static_cast<unsigned>(c.codec.rice_k) << ',' << c.bits << '\n';
    }
}

}  // namespace quars
