#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "quars/codecs.hpp"

using namespace quars;

namespace {

std::uint64_t zigzag_reference(std::int64_t v) {
    const __int128 w = v;
    return static_cast<std::uint64_t>(w >= 0 ? 2 * w : -2 * w - 1);
}

std::string bits_of(const bit_writer& w) {
    std::string s;
    bit_reader r(w.bytes(), w.bit_length());
    while (r.remaining()) s.push_back(r.read_bit() ? '1' : '0');
    return s;
}

}  // namespace

TEST(Zigzag, Examples) {
    EXPECT_EQ(zigzag_map(0), 0u);
    EXPECT_EQ(zigzag_map(-1), 1u);
    EXPECT_EQ(zigzag_map(1), 2u);
    EXPECT_EQ(zigzag_map(-2), 3u);
    EXPECT_EQ(zigzag_map(std::numeric_limits<std::int64_t>::min()), std::numeric_limits<std::uint64_t>::max());
    EXPECT_EQ(zigzag_map(std::numeric_limits<std::int64_t>::max()), std::numeric_limits<std::uint64_t>::max() - 1);
    EXPECT_EQ(zigzag_unmap(0), 0);
    EXPECT_EQ(zigzag_unmap(3), -2);
}

TEST(Zigzag, ExhaustiveSmallAndRandomWide) {
    for (std::uint64_t u = 0; u < (1u << 16); ++u) ASSERT_EQ(zigzag_map(zigzag_unmap(u)), u);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100000; ++i) {
        const auto v = static_cast<std::int64_t>(rng());
        ASSERT_EQ(zigzag_map(v), zigzag_reference(v));
        ASSERT_EQ(zigzag_unmap(zigzag_map(v)), v);
    }
}

TEST(Varint, Examples) {
    std::vector<std::uint8_t> out;
    varint_encode(0, out);
    EXPECT_EQ(out, (std::vector<std::uint8_t>{0x00}));
    out.clear();
    varint_encode(300, out);
    EXPECT_EQ(out, (std::vector<std::uint8_t>{0xAC, 0x02}));
    out.clear();
    varint_encode(std::numeric_limits<std::uint64_t>::max(), out);
    EXPECT_EQ(out.size(), 10u);
    EXPECT_EQ(out.back(), 0x01);
}

TEST(Varint, RoundTripExhaustive) {
    std::vector<std::uint8_t> buf;
    for (std::uint64_t u = 0; u < (1u << 17); ++u) varint_encode(u, buf);
    std::size_t pos = 0;
    for (std::uint64_t u = 0; u < (1u << 17); ++u) ASSERT_EQ(varint_decode(buf, pos), u);
    EXPECT_EQ(pos, buf.size());
    for (std::uint64_t u = 0; u < 128; ++u) EXPECT_EQ(varint_length(u), 1u);
}

TEST(Varint, RejectsMalformed) {
    auto decode_all = [](std::vector<std::uint8_t> bytes) {
        std::size_t pos = 0;
        varint_decode(bytes, pos);
    };
    EXPECT_THROW(decode_all({}), error);
    EXPECT_THROW(decode_all({0x80}), error);
    EXPECT_THROW(decode_all({0x80, 0x00}), error);  // non-minimal
    EXPECT_THROW(decode_all(std::vector<std::uint8_t>(11, 0x80)), error);
    EXPECT_THROW(decode_all({0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0x02}), error);
}

TEST(Rice, Examples) {
    bit_writer a;
    rice_encode(0, 0, a);
    EXPECT_EQ(bits_of(a), "0");

    bit_writer b;
    rice_encode(3, 1, b);
    EXPECT_EQ(bits_of(b), "101");
    EXPECT_EQ(b.bytes(), (std::vector<std::uint8_t>{0b1010'0000}));
}

TEST(Rice, RoundTripExhaustive) {
    for (unsigned k : {0u, 1u, 2u, 5u}) {
        bit_writer w;
        for (std::uint64_t u = 0; u < 4096; ++u) rice_encode(u, k, w);
        bit_reader r(w.bytes(), w.bit_length());
        for (std::uint64_t u = 0; u < 4096; ++u) ASSERT_EQ(rice_decode(k, r), u);
        EXPECT_EQ(r.remaining(), 0u);
    }
}

TEST(Rice, QuotientGuard) {
    bit_writer w;
    EXPECT_EQ([&] {
        try {
            rice_encode(std::uint64_t{1} << 24, 0, w);
        } catch (const error& e) {
            return e.kind();
        }
        return error_kind::io;
    }(), error_kind::value_too_large);
    EXPECT_NO_THROW(rice_encode((std::uint64_t{1} << 24) - 1, 0, w));
    EXPECT_NO_THROW(rice_encode(std::numeric_limits<std::uint64_t>::max(), 63, w));
}

TEST(Rice, TruncatedStream) {
    bit_writer w;
    rice_encode(5, 3, w);
    bit_reader r(w.bytes(), w.bit_length() - 1);
    EXPECT_THROW(rice_decode(3, r), error);
}

TEST(RicePickK, Examples) {
    EXPECT_EQ(rice_pick_k(std::vector<std::uint64_t>(100, 0)), 0u);
    EXPECT_EQ(rice_pick_k(std::vector<std::uint64_t>{1}), 0u);
    // cost(k) = (1024 >> k) + 1 + k ties at k = 9 and k = 10 (12 bits); smaller k wins
    const std::vector<std::uint64_t> same(10, 1024);
    unsigned best = 0;
    for (unsigned k = 1; k <= 32; ++k)
        if (rice_length(1024, k) < rice_length(1024, best)) best = k;
    EXPECT_EQ(rice_pick_k(same), best);
    EXPECT_EQ(best, 9u);
}

TEST(RicePickK, IsTrueArgminOfEncodedLength) {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<std::uint64_t> vals(1 + rng() % 200);
        const unsigned scale = rng() % 22;
        for (auto& v : vals) v = rng() >> (64 - std::max(1u, scale));
        std::uint64_t best_bits = std::numeric_limits<std::uint64_t>::max();
        unsigned best_k = 0;
        for (unsigned k = 0; k <= 32; ++k) {
            bit_writer w;
            bool ok = true;
            for (auto v : vals) {
                if ((v >> k) >= rice_quotient_limit) {
                    ok = false;
                    break;
                }
                rice_encode(v, k, w);
            }
            if (ok && w.bit_length() < best_bits) {
                best_bits = w.bit_length();
                best_k = k;
            }
        }
        ASSERT_EQ(rice_pick_k(vals), best_k);
    }
}

TEST(Gamma, Examples) {
    bit_writer a;
    gamma_encode(0, a);
    EXPECT_EQ(bits_of(a), "1");
    bit_writer b;
    gamma_encode(1, b);
    EXPECT_EQ(bits_of(b), "010");
    bit_writer c;
    gamma_encode(6, c);
    EXPECT_EQ(bits_of(c), "00111");
}

TEST(Gamma, RoundTripExhaustiveAndExtremes) {
    bit_writer w;
    for (std::uint64_t u = 0; u < (1u << 16); ++u) gamma_encode(u, w);
    const std::uint64_t extremes[] = {std::numeric_limits<std::uint64_t>::max(),
                                      std::numeric_limits<std::uint64_t>::max() - 1, std::uint64_t{1} << 63};
    for (auto u : extremes) gamma_encode(u, w);
    bit_reader r(w.bytes(), w.bit_length());
    for (std::uint64_t u = 0; u < (1u << 16); ++u) ASSERT_EQ(gamma_decode(r), u);
    for (auto u : extremes) EXPECT_EQ(gamma_decode(r), u);
    EXPECT_EQ(r.remaining(), 0u);
    EXPECT_EQ(gamma_length(std::numeric_limits<std::uint64_t>::max()), 129u);
}

TEST(Gamma, TruncatedStream) {
    bit_writer w;
    gamma_encode(100, w);
    bit_reader r(w.bytes(), w.bit_length() - 2);
    EXPECT_THROW(gamma_decode(r), error);
    const std::vector<std::uint8_t> zeros(10, 0);
    bit_reader z(zeros);
    EXPECT_THROW(gamma_decode(z), error);
}

TEST(Codecs, MonotoneCost) {
    for (std::uint64_t u = 1; u < (1u << 16); ++u) {
        ASSERT_LE(varint_length(u - 1), varint_length(u));
        ASSERT_LE(gamma_length(u - 1), gamma_length(u));
        for (unsigned k : {0u, 3u, 8u}) ASSERT_LE(rice_length(u - 1, k), rice_length(u, k));
    }
}

TEST(Delta, Examples) {
    using v = std::vector<std::int64_t>;
    EXPECT_EQ(delta_transform(v{5, 6, 7}), (v{5, 1, 1}));
    EXPECT_EQ(delta_transform(v{-9}), (v{-9}));
    EXPECT_THROW(delta_transform(v{}), error);
    EXPECT_THROW(delta_transform(v{std::numeric_limits<std::int64_t>::min(), 1}), error);
    EXPECT_THROW(delta_inverse(v{std::numeric_limits<std::int64_t>::max(), 1}), error);
}

TEST(Delta, RoundTripRandom) {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<std::int64_t> data(1 + rng() % 100);
        for (auto& d : data) d = static_cast<std::int64_t>(rng() >> 2) - (std::int64_t{1} << 61);
        ASSERT_EQ(delta_inverse(delta_transform(data)), data);
    }
}

TEST(BitStream, PadBitsZeroAndExactConsumption) {
    bit_writer w;
    w.write_bits(0b101, 3);
    w.write_bit(true);
    EXPECT_EQ(w.bit_length(), 4u);
    EXPECT_EQ(w.bytes(), (std::vector<std::uint8_t>{0b1011'0000}));
    bit_reader r(w.bytes(), w.bit_length());
    EXPECT_EQ(r.read_bits(4), 0b1011u);
    EXPECT_THROW(r.read_bit(), error);
}

TEST(Payload, RoundTripAllCodecsRandomWide) {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<std::int64_t> vals(1 + rng() % 300);
        const unsigned shift = 1 + rng() % 63;
        for (auto& v : vals) v = static_cast<std::int64_t>(rng()) >> shift;
        for (auto kind : {codec_kind::raw64, codec_kind::varint, codec_kind::rice, codec_kind::elias_gamma}) {
            // near the quotient limit rice payloads reach hundreds of megabytes
            if (kind == codec_kind::rice && shift < 24) continue;
            const auto codec = resolve_codec(kind, std::nullopt, vals);
            std::vector<std::uint8_t> bytes;
            try {
                bytes = encode_payload(vals, codec);
            } catch (const error& e) {
                ASSERT_EQ(e.kind(), error_kind::value_too_large);
                continue;
            }
            ASSERT_EQ((coded_bits(vals, codec) + 7) / 8, bytes.size());
            ASSERT_EQ(decode_payload(bytes, codec, vals.size()), vals);
        }
    }
}

TEST(Payload, RejectsTrailingGarbageAndShortInput) {
    const std::vector<std::int64_t> vals{1, -2, 3};
    for (auto kind : {codec_kind::raw64, codec_kind::varint, codec_kind::rice, codec_kind::elias_gamma}) {
        const codec_id codec{kind, static_cast<std::uint8_t>(kind == codec_kind::rice ? 1 : 0)};
        auto bytes = encode_payload(vals, codec);
        auto longer = bytes;
        longer.push_back(0);
        EXPECT_THROW(decode_payload(longer, codec, vals.size()), error) << codec_name(kind);
        EXPECT_THROW(decode_payload(std::span(bytes).first(bytes.size() - 1), codec, vals.size()), error)
            << codec_name(kind);
    }
}
