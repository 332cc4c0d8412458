#pragma once

// Subcommands of the `quars` tool. Kept in a header so tests can drive the
// exact same code path in-process.
//
// Exit codes: 0 success, 1 invalid input / corrupt data / overflow, 2 I/O.

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quars/quars.hpp"

namespace quars::cli {

namespace fs = std::filesystem;

inline std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(error_kind::io, "cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(error_kind::io, "error while reading '" + path + "'");
    return bytes;
}

/// Writes to a sibling temporary file and renames it into place, so a failed
/// run never leaves a partial output behind.
inline void write_file_atomic(const std::string& path, std::span<const std::uint8_t> bytes) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(error_kind::io, "cannot open '" + tmp.string() + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        out.close();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            fail(error_kind::io, "error while writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        fail(error_kind::io, "cannot move output into place at '" + path + "': " + ec.message());
    }
}

inline dataset_format parse_format(const std::string& name) {
    return name == "bin" ? dataset_format::binary : dataset_format::text;
}

inline std::vector<std::int64_t> load_dataset(const std::string& path, dataset_format format) {
    auto data = parse_dataset(read_file(path), format);
    if (data.empty()) fail(error_kind::invalid_input, "'" + path + "' contains no values");
    return data;
}

inline std::string fixed(double x, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << x;
    return s.str();
}

struct bench_row {
    std::size_t n;
    double seconds;  // median over runs
    double ratio;    // raw 64-bit bytes / container bytes
};

/// One warm-up, then `runs` timed container writes; reports the median.
inline bench_row bench_point(const generator_spec& spec, const write_options& options, unsigned runs) {
    const auto data = generate(spec);
    const auto reference = write_container(data, options);
    std::vector<double> times;
    times.reserve(runs);
    for (unsigned r = 0; r < runs; ++r) {
        const auto start = std::chrono::steady_clock::now();
        const auto bytes = write_container(data, options);
        const auto stop = std::chrono::steady_clock::now();
        if (bytes != reference) fail(error_kind::corrupt_data, "container output is not deterministic");
        times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    const double median = times.size() % 2 ? times[times.size() / 2]
                                           : 0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);
    return {spec.n, median, static_cast<double>(8 * data.size()) / static_cast<double>(reference.size())};
}

inline void print_report(std::ostream& out, const metrics_report& r) {
    out << "n=" << r.n << " min=" << r.min << " max=" << r.max << " mean_abs=" << r.mean_abs.to_decimal()
        << " entropy_bits=" << format_fixed6(r.entropy_order0_bits) << '\n';
    out << "coded_bits";
    for (const auto& c : r.coded_bits) {
        out << ' ' << codec_name(c.codec.kind);
        if (c.codec.kind == codec_kind::rice) out << "(k=" << static_cast<unsigned>(c.codec.rice_k) << ')';
        out << '=' << c.bits;
    }
    out << '\n';
    out << "histogram_rows=" << r.histogram.size() << " bin_width="
        << (r.histogram.empty() ? 0 : r.histogram.front().upper - r.histogram.front().lower) << '\n';
}

inline std::vector<std::size_t> parse_sizes(const std::string& list) {
    std::vector<std::size_t> sizes;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size() || v == 0)
            fail(error_kind::invalid_input, "--sizes: '" + item + "' is not a positive integer");
        sizes.push_back(v);
    }
    if (sizes.empty()) fail(error_kind::invalid_input, "--sizes: list is empty");
    return sizes;
}

inline int exit_code_for(error_kind kind) { return kind == error_kind::io ? 2 : 1; }

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantile-reshuffling integer compression toolkit", "quars"};
    app.require_subcommand(1);

    const std::vector<std::string> codec_names{"raw64", "varint", "rice", "gamma"};
    const std::vector<std::string> dist_names{"bimodal", "sparse", "sine", "gauss"};
    const std::vector<std::string> format_names{"text", "bin"};

    // encode
    std::string enc_input, enc_output, enc_codec = "rice", enc_format = "text";
    std::uint64_t enc_q = 16;
    std::optional<unsigned> enc_rice_k;
    bool enc_delta = false, enc_no_quars = false;
    auto* enc = app.add_subcommand("encode", "Compress a dataset file into a container");
    enc->add_option("--input", enc_input, "Dataset file")->required();
    enc->add_option("--output", enc_output, "Container file")->required();
    enc->add_option("--quantiles,-q", enc_q, "Number of quantiles (>= 1)")->check(CLI::PositiveNumber);
    enc->add_option("--codec", enc_codec, "Payload code")->check(CLI::IsMember(codec_names));
    enc->add_option("--rice-k", enc_rice_k, "Fixed rice parameter (default: best for the data)")
        ->check(CLI::Range(0u, rice_max_k));
    enc->add_flag("--delta", enc_delta, "Delta-code the data before the transform");
    enc->add_flag("--no-quars", enc_no_quars, "Skip the transform (baseline)");
    enc->add_option("--format", enc_format, "Input dataset format")->check(CLI::IsMember(format_names));

    // decode
    std::string dec_input, dec_output, dec_format = "text";
    auto* dec = app.add_subcommand("decode", "Restore a dataset file from a container");
    dec->add_option("--input", dec_input, "Container file")->required();
    dec->add_option("--output", dec_output, "Dataset file")->required();
    dec->add_option("--format", dec_format, "Output dataset format")->check(CLI::IsMember(format_names));

    // gen
    std::string gen_dist, gen_output, gen_format = "text";
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
    gen->add_option("--dist", gen_dist, "Distribution")->required()->check(CLI::IsMember(dist_names));
    gen->add_option("--n", gen_n, "Number of values (>= 1)")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "PRNG seed");
    gen->add_option("--output", gen_output, "Dataset file")->required();
    gen->add_option("--format", gen_format, "Output dataset format")->check(CLI::IsMember(format_names));

    // stats
    std::string st_input, st_csv, st_csv_after, st_metrics_csv, st_format = "text";
    std::optional<std::uint64_t> st_after_q;
    std::optional<std::uint64_t> st_bin_width;
    auto* st = app.add_subcommand("stats", "Report distribution metrics, optionally before/after the transform");
    st->add_option("--input", st_input, "Dataset file")->required();
    st->add_option("--after-quars", st_after_q, "Also report the transformed data for this q")
        ->check(CLI::PositiveNumber);
    st->add_option("--csv", st_csv, "Write the input histogram as CSV");
    st->add_option("--csv-after", st_csv_after, "Write the transformed histogram as CSV");
    st->add_option("--metrics-csv", st_metrics_csv, "Write metrics rows as CSV");
    st->add_option("--bin-width", st_bin_width, "Histogram bin width (default: about 64 rows)")
        ->check(CLI::PositiveNumber);
    st->add_option("--format", st_format, "Input dataset format")->check(CLI::IsMember(format_names));

    // bench
    std::string b_sizes, b_dist = "bimodal", b_codec = "rice", b_csv;
    std::uint64_t b_seed = 1, b_q = 16;
    unsigned b_runs = 5;
    auto* bench = app.add_subcommand("bench", "Time container encoding across dataset sizes");
    bench->add_option("--sizes", b_sizes, "Comma-separated dataset sizes")->required();
    bench->add_option("--dist", b_dist, "Distribution")->check(CLI::IsMember(dist_names));
    bench->add_option("--seed", b_seed, "PRNG seed");
    bench->add_option("--quantiles,-q", b_q, "Number of quantiles (>= 1)")->check(CLI::PositiveNumber);
    bench->add_option("--codec", b_codec, "Payload code")->check(CLI::IsMember(codec_names));
    bench->add_option("--runs", b_runs, "Timed runs per size (median is reported)")->check(CLI::PositiveNumber);
    bench->add_option("--csv", b_csv, "Also write the table to this file");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*enc) {
            const auto data = load_dataset(enc_input, parse_format(enc_format));
            write_options options;
            options.q = enc_q;
            options.codec = *parse_codec_name(enc_codec);
            options.rice_k = enc_rice_k;
            options.use_delta = enc_delta;
            options.apply_quars = !enc_no_quars;
            const auto bytes = write_container(data, options);
            write_file_atomic(enc_output, bytes);
            const auto original = fs::file_size(enc_input);
            out << "original_bytes=" << original << " compressed_bytes=" << bytes.size()
                << " ratio=" << fixed(static_cast<double>(original) / static_cast<double>(bytes.size()), 4) << '\n';
        } else if (*dec) {
            const auto data = read_container(read_file(dec_input));
            write_file_atomic(dec_output, format_dataset(data, parse_format(dec_format)));
            out << "values=" << data.size() << '\n';
        } else if (*gen) {
            generator_spec spec;
            spec.kind = *parse_distribution(gen_dist);
            spec.n = gen_n;
            spec.seed = gen_seed;
            const auto data = generate(spec);
            write_file_atomic(gen_output, format_dataset(data, parse_format(gen_format)));
            out << "values=" << data.size() << '\n';
        } else if (*st) {
            const auto data = load_dataset(st_input, parse_format(st_format));
            const auto before = make_report(data, st_bin_width.value_or(auto_bin_width(data)));
            out << "[before]\n";
            print_report(out, before);
            if (!st_csv.empty()) {
                std::ostringstream s;
                write_histogram_csv(s, before.histogram);
                const auto text = s.str();
                write_file_atomic(st_csv, std::vector<std::uint8_t>(text.begin(), text.end()));
            }
            std::optional<metrics_report> after;
            if (st_after_q) {
                const auto transformed = encode(data, *st_after_q).values;
                after = make_report(transformed, st_bin_width.value_or(auto_bin_width(transformed)));
                out << "[after q=" << *st_after_q << "]\n";
                print_report(out, *after);
                out << "[delta]\n";
                out << "mean_abs " << before.mean_abs.to_decimal() << " -> " << after->mean_abs.to_decimal() << '\n';
                out << "entropy_bits " << format_fixed6(before.entropy_order0_bits) << " -> "
                    << format_fixed6(after->entropy_order0_bits) << '\n';
                for (const auto& b : before.coded_bits) {
                    if (b.codec.kind == codec_kind::raw64) continue;
                    for (const auto& a : after->coded_bits) {
                        if (a.codec.kind != b.codec.kind) continue;
                        out << "coded_bits " << codec_name(b.codec.kind) << ' ' << b.bits << " -> " << a.bits
                            << '\n';
                    }
                }
                if (!st_csv_after.empty()) {
                    std::ostringstream s;
                    write_histogram_csv(s, after->histogram);
                    const auto text = s.str();
                    write_file_atomic(st_csv_after, std::vector<std::uint8_t>(text.begin(), text.end()));
                }
            } else if (!st_csv_after.empty()) {
                fail(error_kind::invalid_input, "--csv-after requires --after-quars");
            }
            if (!st_metrics_csv.empty()) {
                std::ostringstream s;
                write_metrics_csv_header(s);
                write_metrics_csv_rows(s, "before", before);
                if (after) write_metrics_csv_rows(s, "after", *after);
                const auto text = s.str();
                write_file_atomic(st_metrics_csv, std::vector<std::uint8_t>(text.begin(), text.end()));
            }
        } else if (*bench) {
            const auto sizes = parse_sizes(b_sizes);
            write_options options;
            options.q = b_q;
            options.codec = *parse_codec_name(b_codec);
            std::ostringstream table;
            table << "n,seconds,ratio\n";
            for (std::size_t n : sizes) {
                generator_spec spec;
                spec.kind = *parse_distribution(b_dist);
                spec.n = n;
                spec.seed = b_seed;
                const auto row = bench_point(spec, options, b_runs);
                table << row.n << ',' << fixed(row.seconds, 6) << ',' << fixed(row.ratio, 6) << '\n';
            }
            out << table.str();
            if (!b_csv.empty()) {
                const auto text = table.str();
                write_file_atomic(b_csv, std::vector<std::uint8_t>(text.begin(), text.end()));
            }
        }
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const fs::filesystem_error& e) {
        err << "error: IoError: " << e.what() << '\n';
        return 2;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return 1;
    }
    return 0;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), out, err);
}

}  // namespace quars::cli
