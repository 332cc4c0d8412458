#pragma once

// Quantile reshuffling: rebin integer data by its sample quantiles, order the
// bins narrow-and-dense first, and lay them out alternately left and right of
// zero so that frequent values end up with small magnitudes. The mapping is a
// per-bin shift, so it is exactly invertible given the sorted bin bounds.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "quars/error.hpp"

namespace quars {

struct bin_layout {
    std::vector<std::int64_t> boundaries;  // strictly increasing, bin_count() + 1 entries
    std::vector<std::int64_t> widths;
    std::vector<std::size_t> counts;
    std::vector<std::size_t> sort_index;  // 0-based bin indices in placement order

    std::size_t bin_count() const noexcept { return widths.size(); }
};

/// What the decoder needs: left bounds in placement order plus the exclusive
/// upper bound of the last bin (the left bounds alone cannot give its width).
struct shuffle_metadata {
    std::vector<std::int64_t> shuffled_left_bounds;
    std::int64_t global_upper_bound = 0;

    friend bool operator==(const shuffle_metadata&, const shuffle_metadata&) = default;
};

/// Where one source bin [source_lower, source_lower + width) lands.
struct placement {
    std::int64_t source_lower;
    std::int64_t target_lower;
    std::int64_t width;
};

struct encode_result {
    shuffle_metadata metadata;
    std::vector<std::int64_t> values;
};

namespace detail {

inline void require_nonempty(std::span<const std::int64_t> data) {
    if (data.empty())
        fail(error_kind::invalid_input, "dataset must contain at least one value");
}

}  // namespace detail

/// q-1 thresholds s[floor(N*k/q)] (1-based, clamped to 1) for k = 1..q-1.
/// Duplicates are kept; build_bins resolves them.
inline std::vector<std::int64_t> compute_quantiles(std::span<const std::int64_t> data, std::uint64_t q) {
    detail::require_nonempty(data);
    if (q == 0)
        fail(error_kind::invalid_input, "number of quantiles must be at least 1");

    std::vector<std::int64_t> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());

    const auto n = static_cast<unsigned __int128>(sorted.size());
    std::vector<std::int64_t> thresholds;
    thresholds.reserve(static_cast<std::size_t>(q - 1));
    for (std::uint64_t k = 1; k < q; ++k) {
        auto index = static_cast<std::size_t>(n * k / q);
        if (index < 1) index = 1;
        thresholds.push_back(sorted[index - 1]);
    }
    return thresholds;
}

/// Orders bins by width ascending, then count descending, then original index.
inline bin_layout sort_bins(bin_layout layout) {
    layout.sort_index.resize(layout.bin_count());
    std::iota(layout.sort_index.begin(), layout.sort_index.end(), std::size_t{0});
    std::sort(layout.sort_index.begin(), layout.sort_index.end(), [&](std::size_t a, std::size_t b) {
        if (layout.widths[a] != layout.widths[b]) return layout.widths[a] < layout.widths[b];
        if (layout.counts[a] != layout.counts[b]) return layout.counts[a] > layout.counts[b];
        return a < b;
    });
    return layout;
}

/// Boundaries run from min(data) to max(data)+1. Each threshold is accepted as
/// max(threshold, previous + 1); candidates reaching the upper bound are dropped.
inline bin_layout build_bins(std::span<const std::int64_t> data, std::span<const std::int64_t> thresholds) {
    detail::require_nonempty(data);
    const auto [min_it, max_it] = std::minmax_element(data.begin(), data.end());
    const std::int64_t lo = *min_it;
    const std::int64_t hi = *max_it;
    if (hi == std::numeric_limits<std::int64_t>::max())
        fail(error_kind::overflow, "maximum value leaves no room for an exclusive upper bound");
    const std::int64_t upper = hi + 1;
    detail::checked_sub(upper, lo);  // total range width must be representable

    bin_layout layout;
    layout.boundaries.reserve(thresholds.size() + 2);
    layout.boundaries.push_back(lo);
    std::int64_t previous_threshold = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t candidate : thresholds) {
        if (candidate < previous_threshold)
            fail(error_kind::invalid_input, "thresholds must be non-decreasing");
        previous_threshold = candidate;
        if (candidate < lo || candidate > hi)
            fail(error_kind::invalid_input, "threshold lies outside the data range");
        const std::int64_t accepted = std::max(candidate, layout.boundaries.back() + 1);
        if (accepted >= upper) break;  // later candidates can only be larger
        layout.boundaries.push_back(accepted);
    }
    layout.boundaries.push_back(upper);

    const std::size_t bins = layout.boundaries.size() - 1;
    layout.widths.resize(bins);
    for (std::size_t i = 0; i < bins; ++i)
        layout.widths[i] = layout.boundaries[i + 1] - layout.boundaries[i];

    layout.counts.assign(bins, 0);
    for (std::int64_t d : data) {
        auto it = std::upper_bound(layout.boundaries.begin(), layout.boundaries.end(), d);
        ++layout.counts[static_cast<std::size_t>(it - layout.boundaries.begin()) - 1];
    }
    return sort_bins(std::move(layout));
}

/// Target left edges for bins given their widths in placement order. The
/// first bin goes left of zero, the second starts at zero, and so on.
inline std::vector<std::int64_t> place_bins(std::span<const std::int64_t> widths_in_order) {
    std::vector<std::int64_t> positions(widths_in_order.size());
    std::int64_t left = 0;
    std::int64_t right = 0;
    for (std::size_t k = 0; k < widths_in_order.size(); ++k) {
        // k is 0-based here, so even k is an odd (left) step.
        if (k % 2 == 1) {
            positions[k] = right;
            right = detail::checked_add(right, widths_in_order[k]);
        } else {
            left = detail::checked_sub(left, widths_in_order[k]);
            positions[k] = left;
        }
    }
    return positions;
}

/// One entry per bin, in placement order.
inline std::vector<placement> placements(const bin_layout& layout) {
    std::vector<std::int64_t> ordered_widths;
    ordered_widths.reserve(layout.bin_count());
    for (std::size_t i : layout.sort_index) ordered_widths.push_back(layout.widths[i]);
    const auto positions = place_bins(ordered_widths);

    std::vector<placement> out;
    out.reserve(layout.bin_count());
    for (std::size_t k = 0; k < layout.bin_count(); ++k) {
        const std::size_t i = layout.sort_index[k];
        out.push_back({layout.boundaries[i], positions[k], layout.widths[i]});
    }
    return out;
}

inline std::vector<std::int64_t> reshuffle(std::span<const std::int64_t> data, const bin_layout& layout) {
    detail::require_nonempty(data);
    // Per-bin target edge, indexed by original bin.
    std::vector<std::int64_t> target(layout.bin_count());
    for (const auto& p : placements(layout)) {
        auto it = std::lower_bound(layout.boundaries.begin(), layout.boundaries.end(), p.source_lower);
        target[static_cast<std::size_t>(it - layout.boundaries.begin())] = p.target_lower;
    }

    const auto first = layout.boundaries.front();
    const auto last = layout.boundaries.back();
    std::vector<std::int64_t> out(data.size());
    for (std::size_t j = 0; j < data.size(); ++j) {
        const std::int64_t d = data[j];
        if (d < first || d >= last)
            fail(error_kind::invalid_input, "value lies outside the bin layout");
        auto it = std::upper_bound(layout.boundaries.begin(), layout.boundaries.end(), d);
        const auto i = static_cast<std::size_t>(it - layout.boundaries.begin()) - 1;
        out[j] = detail::checked_add(detail::checked_sub(d, layout.boundaries[i]), target[i]);
    }
    return out;
}

inline shuffle_metadata make_metadata(const bin_layout& layout) {
    shuffle_metadata meta;
    meta.shuffled_left_bounds.reserve(layout.bin_count());
    for (std::size_t i : layout.sort_index) meta.shuffled_left_bounds.push_back(layout.boundaries[i]);
    meta.global_upper_bound = layout.boundaries.back();
    return meta;
}

inline encode_result encode(std::span<const std::int64_t> data, std::uint64_t q) {
    const auto thresholds = compute_quantiles(data, q);
    const auto layout = build_bins(data, thresholds);
    return {make_metadata(layout), reshuffle(data, layout)};
}

/// Validates metadata and returns the original-order boundaries
/// (sorted left bounds followed by the upper bound).
inline std::vector<std::int64_t> original_boundaries(const shuffle_metadata& meta) {
    if (meta.shuffled_left_bounds.empty())
        fail(error_kind::corrupt_data, "metadata lists no bins");
    std::vector<std::int64_t> bounds(meta.shuffled_left_bounds);
    std::sort(bounds.begin(), bounds.end());
    if (std::adjacent_find(bounds.begin(), bounds.end()) != bounds.end())
        fail(error_kind::corrupt_data, "metadata contains duplicate bin bounds");
    if (meta.global_upper_bound <= bounds.back())
        fail(error_kind::corrupt_data, "upper bound does not exceed every bin bound");
    std::int64_t span_width;
    if (__builtin_sub_overflow(meta.global_upper_bound, bounds.front(), &span_width))
        fail(error_kind::corrupt_data, "bin range exceeds signed 64-bit capacity");
    bounds.push_back(meta.global_upper_bound);
    return bounds;
}

inline std::vector<std::int64_t> decode(std::span<const std::int64_t> transformed, const shuffle_metadata& meta) {
    const auto bounds = original_boundaries(meta);
    const std::size_t bins = bounds.size() - 1;

    std::vector<std::int64_t> ordered_widths(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        auto it = std::lower_bound(bounds.begin(), bounds.end() - 1, meta.shuffled_left_bounds[k]);
        const auto i = static_cast<std::size_t>(it - bounds.begin());
        ordered_widths[k] = bounds[i + 1] - bounds[i];
    }
    const auto positions = place_bins(ordered_widths);

    // Targets tile [-L, R); sort them by position for lookup.
    std::vector<placement> targets(bins);
    for (std::size_t k = 0; k < bins; ++k)
        targets[k] = {meta.shuffled_left_bounds[k], positions[k], ordered_widths[k]};
    std::sort(targets.begin(), targets.end(),
              [](const placement& a, const placement& b) { return a.target_lower < b.target_lower; });

    std::vector<std::int64_t> out(transformed.size());
    for (std::size_t j = 0; j < transformed.size(); ++j) {
        const std::int64_t v = transformed[j];
        auto it = std::upper_bound(targets.begin(), targets.end(), v,
                                   [](std::int64_t x, const placement& p) { return x < p.target_lower; });
        if (it == targets.begin())
            fail(error_kind::corrupt_data, "value " + std::to_string(v) + " lies below every bin");
        const placement& p = *(it - 1);
        std::int64_t offset;
        if (__builtin_sub_overflow(v, p.target_lower, &offset) || offset >= p.width)
            fail(error_kind::corrupt_data, "value " + std::to_string(v) + " lies above every bin");
        out[j] = offset + p.source_lower;
    }
    return out;
}

}  // namespace quars
