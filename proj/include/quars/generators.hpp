#pragma once

// Seeded synthetic datasets: two-peak mixture, sparse skewed support,
// noisy sinusoid, centered Gaussian. The bit source is std::mt19937_64,
// whose output sequence is fixed by the C++ standard; uniforms take the top
// 53 bits, normals use Box-Muller (cosine branch only), and every real value
// is rounded half away from zero.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "quars/error.hpp"

namespace quars {

enum class distribution {
    bimodal,
    sparse_asym,
    sine_noise,
    gauss,
};

inline std::string_view distribution_name(distribution d) noexcept {
    switch (d) {
    case distribution::bimodal: return "bimodal";
    case distribution::sparse_asym: return "sparse";
    case distribution::sine_noise: return "sine";
    case distribution::gauss: return "gauss";
    }
    return "unknown";
}

inline std::optional<distribution> parse_distribution(std::string_view name) noexcept {
    if (name == "bimodal") return distribution::bimodal;
    if (name == "sparse" || name == "sparse_asym") return distribution::sparse_asym;
    if (name == "sine" || name == "sine_noise") return distribution::sine_noise;
    if (name == "gauss") return distribution::gauss;
    return std::nullopt;
}

struct generator_spec {
    distribution kind = distribution::gauss;
    std::size_t n = 0;
    std::uint64_t seed = 1;

    // bimodal: equal mixture of N(-center, sigma) and N(+center, sigma)
    double mode_center = 100.0;
    double mode_sigma = 10.0;

    // sparse_asym: weighted choice over a few support points
    std::vector<std::int64_t> support{0, 7, 50, 51, 300};
    std::vector<double> weights{0.5, 0.2, 0.15, 0.1, 0.05};

    // sine_noise: round(A sin(2 pi t / P)) + round(N(0, noise_sigma)), t = 0, 1, ...
    double amplitude = 100.0;
    double period = 50.0;
    double noise_sigma = 5.0;

    // gauss
    double sigma = 40.0;
};

namespace detail {

class sample_source {
public:
    explicit sample_source(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

inline std::int64_t round_half_away(double x) {
    const double r = std::round(x);
    if (!(r > -0x1.0p63 && r < 0x1.0p63)) fail(error_kind::overflow, "generated value exceeds signed 64-bit range");
    return static_cast<std::int64_t>(r);
}

}  // namespace detail

inline std::vector<std::int64_t> generate(const generator_spec& spec) {
    if (spec.n == 0) fail(error_kind::invalid_input, "sample count must be at least 1");

    detail::sample_source src(spec.seed);
    std::vector<std::int64_t> out;
    out.reserve(spec.n);

    switch (spec.kind) {
    case distribution::bimodal:
        for (std::size_t t = 0; t < spec.n; ++t) {
            const double center = (src.bits() >> 63) ? spec.mode_center : -spec.mode_center;
            out.push_back(detail::round_half_away(center + spec.mode_sigma * src.normal()));
        }
        break;
    case distribution::sparse_asym: {
        if (spec.support.empty() || spec.support.size() != spec.weights.size())
            fail(error_kind::invalid_input, "support and weights must be nonempty and of equal length");
        double total = 0.0;
        for (double w : spec.weights) {
            if (!(w >= 0.0)) fail(error_kind::invalid_input, "weights must be non-negative");
            total += w;
        }
        if (!(total > 0.0)) fail(error_kind::invalid_input, "weights must not all be zero");
        for (std::size_t t = 0; t < spec.n; ++t) {
            const double u = src.uniform() * total;
            double acc = 0.0;
            std::size_t pick = spec.support.size() - 1;
            for (std::size_t i = 0; i < spec.weights.size(); ++i) {
                acc += spec.weights[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
            out.push_back(spec.support[pick]);
        }
        break;
    }
    case distribution::sine_noise:
        if (!(spec.period > 0.0)) fail(error_kind::invalid_input, "period must be positive");
        for (std::size_t t = 0; t < spec.n; ++t) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / spec.period;
            out.push_back(detail::round_half_away(spec.amplitude * std::sin(phase)) +
                          detail::round_half_away(spec.noise_sigma * src.normal()));
        }
        break;
    case distribution::gauss:
        for (std::size_t t = 0; t < spec.n; ++t) out.push_back(detail::round_half_away(spec.sigma * src.normal()));
        break;
    }
    return out;
}

}  // namespace quars
