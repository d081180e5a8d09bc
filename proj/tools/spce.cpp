// spce — simulate, pair, analyze and scan Bell-test click streams.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spce/config.hpp"
#include "spce/errors.hpp"
#include "spce/io.hpp"
#include "spce/pairing.hpp"

namespace fs = std::filesystem;
using namespace spce;

namespace {

int exit_code(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::config: return 2;
        case ErrorKind::data: return 3;
        case ErrorKind::io: return 4;
    }
    return 1;
}

// "A1","B2" -> "12"; anything outside the A*/B* vocabulary concatenates.
std::string derive_context_id(const std::string& a, const std::string& b) {
    if (a.size() > 1 && b.size() > 1 && a[0] == 'A' && b[0] == 'B') return a.substr(1) + b.substr(1);
    return a + "x" + b;
}

SignVector fixed_gamma(int n) {
    SignVector g(static_cast<std::size_t>(n), 1);
    g.back() = -1;
    return g;
}

std::vector<ContextStreams> simulate_contexts(const RunConfig& cfg) {
    std::vector<ContextStreams> out;
    out.reserve(cfg.system.contexts.size());
    for (std::size_t i = 0; i < cfg.system.contexts.size(); ++i) {
        auto [a, b] = simulate_run(cfg.model, cfg.context_settings[i]);
        out.push_back(ContextStreams{cfg.system.contexts[i].id, std::move(a), std::move(b)});
    }
    return out;
}

int cmd_simulate(const std::string& config_path, const std::string& only_context, const std::string& out_dir) {
    const RunConfig cfg = load_run_config(config_path);
    const fs::path dir = out_dir.empty() ? fs::path(cfg.out_dir) : fs::path(out_dir);
    if (dir.empty()) throw_config("config-error", "no output directory (--out or config out_dir)");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw_io("io-error", "cannot create directory '" + dir.string() + "'");

    bool matched = false;
    for (std::size_t i = 0; i < cfg.system.contexts.size(); ++i) {
        const auto& id = cfg.system.contexts[i].id;
        if (!only_context.empty() && id != only_context) continue;
        matched = true;
        const auto [a, b] = simulate_run(cfg.model, cfg.context_settings[i]);
        const fs::path pa = dir / ("stream_" + id + "_A.txt");
        const fs::path pb = dir / ("stream_" + id + "_B.txt");
        write_file_atomic(pa, format_stream(a));
        write_file_atomic(pb, format_stream(b));
        std::cerr << "wrote " << pa.string() << " (" << a.clicks.size() << " clicks)\n";
        std::cerr << "wrote " << pb.string() << " (" << b.clicks.size() << " clicks)\n";
    }
    if (!only_context.empty() && !matched)
        throw_config("config-error", "context '" + only_context + "' not present in config");
    return 0;
}

int cmd_pair(const std::string& in_a, const std::string& in_b, std::int64_t window_ns, std::int64_t shift_ns,
             const std::string& out_path) {
    const TimeTaggedStream a = parse_stream(read_file(in_a), in_a);
    const TimeTaggedStream b = parse_stream(read_file(in_b), in_b);
    if (a.duration_ns != b.duration_ns) throw_data("protocol-mismatch", "streams differ in duration_ns");
    if (a.side != Side::A || b.side != Side::B)
        throw_data("protocol-mismatch", "--in-a must hold a side-A stream and --in-b a side-B stream");

    const WindowedSample wa = window_filter(a, window_ns, shift_ns);
    const WindowedSample wb = window_filter(b, window_ns, shift_ns);
    const PairedSample p = coincidence_pair(wa, wb, derive_context_id(a.setting, b.setting));
    write_file_atomic(out_path, format_paired(p));
    std::printf("N_x=%" PRIu64 " N_y=%" PRIu64 " N_xy=%" PRIu64 "\n", wa.kept_windows, wb.kept_windows,
                p.size());
    return 0;
}

int cmd_analyze(const std::vector<std::string>& table_paths, const std::string& counts_path, double alpha,
                const std::string& variant_name, const std::string& gamma_mode) {
    ExpectationTable table;
    if (!counts_path.empty()) {
        table = table_from_json(read_file(counts_path), counts_path);
    } else {
        if (table_paths.size() != 4)
            throw_config("config-error", "--tables expects exactly 4 paired-sample files");
        std::vector<PairedSample> paired;
        paired.reserve(4);
        for (const auto& p : table_paths) paired.push_back(parse_paired(read_file(p), p));
        table = estimate_table(paired, eprb_system());
    }

    const SVariant variant = parse_variant(variant_name);
    if (gamma_mode != "fixed" && gamma_mode != "max")
        throw_config("config-error", "--gamma must be 'fixed' or 'max'");

    const CbdStatistics stats = cbd_statistics(table);
    const bool post_hoc = gamma_mode == "max";
    const SignVector gamma =
        post_hoc ? maximizing_sign_vector(cycle_correlations(table)) : fixed_gamma(table.spec.n);

    const Interval ci = s_interval(table, alpha, variant, gamma);
    VerdictReport rep = verdict(ci, table.spec.n);
    rep.alpha = alpha;
    rep.variant = variant;
    rep.gamma = gamma;
    rep.post_hoc_gamma = post_hoc;

    std::cout << report_to_json(stats, rep, table.spec);
    std::fprintf(stderr, "verdict: %s (bound %s)\n", to_string(rep.verdict).c_str(),
                 format_g12(rep.bound).c_str());
    std::fprintf(stderr, "s_odd=%s delta=%s s_cbd=%s s_printed=%s\n", format_g12(stats.s_odd).c_str(),
                 format_g12(stats.delta).c_str(), format_g12(stats.s_cbd).c_str(),
                 format_g12(stats.s_printed).c_str());
    std::fprintf(stderr, "I(%s) = [%s, %s] at alpha=%s\n", to_string(variant).c_str(),
                 format_g12(ci.lo).c_str(), format_g12(ci.hi).c_str(), format_g12(alpha).c_str());
    return 0;
}

int cmd_scan(const std::string& config_path, std::vector<std::int64_t> windows,
             std::vector<std::int64_t> shifts, const std::string& out_path) {
    const RunConfig cfg = load_run_config(config_path);
    if (windows.empty()) windows = cfg.windows_ns;
    if (shifts.empty()) shifts = cfg.shifts_ns;
    if (windows.empty()) throw_config("config-error", "empty window list");
    if (shifts.empty()) throw_config("config-error", "empty shift list");

    const auto streams = simulate_contexts(cfg);
    const auto points = scan(cfg.system, streams, windows, shifts);
    write_file_atomic(out_path, scan_to_csv(points, cfg.alpha, cfg.variant));

    const auto [W, D] = optimal_window(points);
    std::uint64_t best = 0;
    for (const auto& p : points)
        if (p.W_ns == W && p.shift_ns == D) best = p.total_coincidences;
    std::printf("optimal W_ns=%" PRId64 " shift_ns=%" PRId64 " coincidences=%" PRIu64 "\n", W, D, best);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell-test click-stream simulator and contextuality analyzer"};
    app.require_subcommand(1);

    std::string config_path, only_context, out_dir;
    auto* simulate = app.add_subcommand("simulate", "generate raw time-tagged streams per context");
    simulate->add_option("config", config_path, "run configuration JSON")->required();
    simulate->add_option("--context", only_context, "restrict to one context id");
    simulate->add_option("--out", out_dir, "output directory");

    std::string in_a, in_b, pair_out;
    std::int64_t window_ns = 0, shift_ns = 0;
    auto* pair = app.add_subcommand("pair", "window two streams and keep coincidences");
    pair->add_option("--in-a", in_a, "side-A stream file")->required();
    pair->add_option("--in-b", in_b, "side-B stream file")->required();
    pair->add_option("--window-ns", window_ns, "window width W in ns")->required();
    pair->add_option("--shift-ns", shift_ns, "window shift Delta in ns (side B origin)");
    pair->add_option("--out", pair_out, "paired-sample output file")->required();

    std::vector<std::string> table_paths;
    std::string counts_path, variant_name = "s_cbd", gamma_mode = "max";
    double alpha = 0.05;
    auto* analyze = app.add_subcommand("analyze", "evaluate inequalities and interval verdicts");
    analyze->add_option("--tables", table_paths, "4 paired-sample files (EPRB contexts)")->expected(4);
    analyze->add_option("--counts", counts_path, "expectation-table JSON");
    analyze->add_option("--alpha", alpha, "total confidence budget");
    analyze->add_option("--variant", variant_name, "s_cbd or s_printed");
    analyze->add_option("--gamma", gamma_mode, "'max' (data-chosen) or 'fixed'");

    std::vector<std::int64_t> scan_windows, scan_shifts;
    std::string scan_config, scan_out;
    auto* scan_cmd = app.add_subcommand("scan", "run the full pipeline over a (W, Delta) grid");
    scan_cmd->add_option("config", scan_config, "run configuration JSON")->required();
    scan_cmd->add_option("--windows", scan_windows, "window widths (ns)")->delimiter(',');
    scan_cmd->add_option("--shifts", scan_shifts, "window shifts (ns)")->delimiter(',');
    scan_cmd->add_option("--out", scan_out, "scan CSV output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, only_context, out_dir);
        if (pair->parsed()) return cmd_pair(in_a, in_b, window_ns, shift_ns, pair_out);
        if (analyze->parsed()) {
            if (counts_path.empty() == table_paths.empty())
                throw_config("config-error", "analyze needs exactly one of --tables or --counts");
            return cmd_analyze(table_paths, counts_path, alpha, variant_name, gamma_mode);
        }
        if (scan_cmd->parsed()) return cmd_scan(scan_config, scan_windows, scan_shifts, scan_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
