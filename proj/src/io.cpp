#include "spce/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spce/errors.hpp"

namespace spce {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& what) {
    throw_data("parse-error", source + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

// "key=value" tokens after the leading "#".
std::map<std::string, std::string> parse_header(const std::string& line, const std::string& source) {
    if (line.empty() || line[0] != '#') parse_fail(source, 1, "expected '#' header line");
    std::map<std::string, std::string> kv;
    std::istringstream in(line.substr(1));
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) parse_fail(source, 1, "malformed header token '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

std::string header_field(const std::map<std::string, std::string>& kv, const std::string& key,
                         const std::string& source) {
    const auto it = kv.find(key);
    if (it == kv.end()) parse_fail(source, 1, "header missing '" + key + "'");
    return it->second;
}

int parse_outcome_token(const std::string& tok, const std::string& source, std::size_t line) {
    if (tok == "+1") return 1;
    if (tok == "-1") return -1;
    parse_fail(source, line, "outcome must be +1 or -1, got '" + tok + "'");
}

std::int64_t parse_i64(const std::string& tok, const std::string& source, std::size_t line) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        parse_fail(source, line, "expected integer, got '" + tok + "'");
    }
}

std::uint64_t parse_u64(const std::string& tok, const std::string& source, std::size_t line) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        parse_fail(source, line, "expected unsigned integer, got '" + tok + "'");
    }
}

std::pair<std::string, std::string> split_csv2(const std::string& line, const std::string& source,
                                               std::size_t lineno) {
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
        parse_fail(source, lineno, "expected exactly one comma");
    return {line.substr(0, comma), line.substr(comma + 1)};
}

json counts_to_json(const ContextCounts& c) {
    return json{{"pp", c.n_pp}, {"pm", c.n_pm}, {"mp", c.n_mp}, {"mm", c.n_mm}};
}

}  // namespace

std::string format_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string to_string(SVariant v) { return v == SVariant::s_cbd ? "s_cbd" : "s_printed"; }

SVariant parse_variant(const std::string& s) {
    if (s == "s_cbd") return SVariant::s_cbd;
    if (s == "s_printed") return SVariant::s_printed;
    throw_config("config-error", "variant must be s_cbd or s_printed, got '" + s + "'");
}

std::string format_stream(const TimeTaggedStream& stream) {
    std::string out;
    out.reserve(32 * stream.clicks.size() + 128);
    char buf[128];
    std::snprintf(buf, sizeof buf, "# side=%c setting=%s seed=%" PRIu64 " duration_ns=%" PRIu64 " model=%s\n",
                  side_char(stream.side), stream.setting.c_str(), stream.seed, stream.duration_ns,
                  to_string(stream.model).c_str());
    out += buf;
    for (const auto& c : stream.clicks) {
        std::snprintf(buf, sizeof buf, "%" PRId64 ",%+d\n", c.t_ns, c.outcome);
        out += buf;
    }
    return out;
}

TimeTaggedStream parse_stream(const std::string& text, const std::string& source_name) {
    const auto lines = split_lines(text);
    if (lines.empty()) parse_fail(source_name, 1, "empty file");
    const auto kv = parse_header(lines[0], source_name);

    TimeTaggedStream s;
    const auto side = header_field(kv, "side", source_name);
    if (side == "A")
        s.side = Side::A;
    else if (side == "B")
        s.side = Side::B;
    else
        parse_fail(source_name, 1, "side must be A or B, got '" + side + "'");
    s.setting = header_field(kv, "setting", source_name);
    s.seed = parse_u64(header_field(kv, "seed", source_name), source_name, 1);
    s.duration_ns = parse_u64(header_field(kv, "duration_ns", source_name), source_name, 1);
    const auto model = parse_model(header_field(kv, "model", source_name));
    if (!model) parse_fail(source_name, 1, "unknown model id");
    s.model = *model;

    std::int64_t prev = -1;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto [t_tok, o_tok] = split_csv2(lines[i], source_name, i + 1);
        Click c;
        c.t_ns = parse_i64(t_tok, source_name, i + 1);
        c.outcome = parse_outcome_token(o_tok, source_name, i + 1);
        if (c.t_ns <= prev) parse_fail(source_name, i + 1, "timestamps must be strictly ascending");
        if (c.t_ns < 0 || c.t_ns >= static_cast<std::int64_t>(s.duration_ns))
            parse_fail(source_name, i + 1, "timestamp outside [0, duration_ns)");
        prev = c.t_ns;
        s.clicks.push_back(c);
    }
    return s;
}

std::string format_paired(const PairedSample& sample) {
    std::string out;
    out.reserve(8 * sample.pairs.size() + 64);
    char buf[128];
    std::snprintf(buf, sizeof buf, "# context=%s W_ns=%" PRId64 " shift_ns=%" PRId64 "\n",
                  sample.context.c_str(), sample.W_ns, sample.shift_ns);
    out += buf;
    for (const auto& [a, b] : sample.pairs) {
        std::snprintf(buf, sizeof buf, "%+d,%+d\n", static_cast<int>(a), static_cast<int>(b));
        out += buf;
    }
    return out;
}

PairedSample parse_paired(const std::string& text, const std::string& source_name) {
    const auto lines = split_lines(text);
    if (lines.empty()) parse_fail(source_name, 1, "empty file");
    const auto kv = parse_header(lines[0], source_name);

    PairedSample p;
    p.context = header_field(kv, "context", source_name);
    p.W_ns = parse_i64(header_field(kv, "W_ns", source_name), source_name, 1);
    p.shift_ns = parse_i64(header_field(kv, "shift_ns", source_name), source_name, 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto [a_tok, b_tok] = split_csv2(lines[i], source_name, i + 1);
        const int a = parse_outcome_token(a_tok, source_name, i + 1);
        const int b = parse_outcome_token(b_tok, source_name, i + 1);
        p.pairs.emplace_back(static_cast<std::int8_t>(a), static_cast<std::int8_t>(b));
    }
    return p;
}

std::string table_to_json(const ExpectationTable& table) {
    json contexts = json::array();
    for (std::size_t i = 0; i < table.spec.contexts.size(); ++i) {
        const auto& ctx = table.spec.contexts[i];
        contexts.push_back(json{{"id", ctx.id},
                                {"members", json::array({ctx.members[0], ctx.members[1]})},
                                {"counts", counts_to_json(table.counts[i])}});
    }
    const json doc{{"n", table.spec.n}, {"contexts", contexts}};
    return doc.dump(2) + "\n";
}

ExpectationTable table_from_json(const std::string& text, const std::string& source_name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw_data("parse-error", source_name + ": " + e.what());
    }
    try {
        ExpectationTable t;
        t.spec.n = doc.at("n").get<int>();
        for (const auto& ctx : doc.at("contexts")) {
            Context c;
            c.id = ctx.at("id").get<std::string>();
            const auto& m = ctx.at("members");
            if (!m.is_array() || m.size() != 2)
                throw_data("parse-error", source_name + ": context '" + c.id + "' needs 2 members");
            c.members = {m[0].get<std::string>(), m[1].get<std::string>()};
            t.spec.contexts.push_back(c);

            const auto& cnt = ctx.at("counts");
            ContextCounts cc;
            cc.context = c.id;
            cc.n_pp = cnt.at("pp").get<std::uint64_t>();
            cc.n_pm = cnt.at("pm").get<std::uint64_t>();
            cc.n_mp = cnt.at("mp").get<std::uint64_t>();
            cc.n_mm = cnt.at("mm").get<std::uint64_t>();
            t.counts.push_back(cc);
        }
        return t;
    } catch (const json::exception& e) {
        throw_data("parse-error", source_name + ": " + e.what());
    }
}

std::string report_to_json(const CbdStatistics& stats, const VerdictReport& report,
                           const CyclicSystemSpec& spec) {
    json jstats{{"n", stats.n},
                {"s_odd", stats.s_odd},
                {"delta", stats.delta},
                {"s_cbd", stats.s_cbd},
                {"s_printed", stats.s_printed},
                {"bound", stats.bound},
                {"trivial_bound", stats.trivial_bound},
                {"cycle_violated", stats.cycle_violated},
                {"cbd_contextual", stats.cbd_contextual}};
    if (stats.has_chsh) jstats["chsh_s"] = stats.chsh_s;

    json jreport{{"s_lo", report.interval_s.lo},
                 {"s_hi", report.interval_s.hi},
                 {"bound", report.bound},
                 {"verdict", to_string(report.verdict)},
                 {"alpha", report.alpha},
                 {"variant", to_string(report.variant)},
                 {"gamma", report.gamma},
                 {"post_hoc_gamma", report.post_hoc_gamma}};

    // Reporting conventions: which marginal pairing feeds delta, and how the
    // alpha budget is split. The alternative listed for each is recorded but
    // not used.
    json pairing = json::array();
    for (const auto& slot : spec.content_slots()) {
        pairing.push_back(json{{"content", slot.content},
                               {"contexts", json::array({spec.contexts[static_cast<std::size_t>(slot.ctx_a)].id,
                                                         spec.contexts[static_cast<std::size_t>(slot.ctx_b)].id})}});
    }
    json meta{{"delta_pairing", "content-sharing"},
              {"delta_pairs", pairing},
              {"alpha_allocation", "alpha/(2n) per product term, alpha/(2n) per difference term"},
              {"alpha_allocation_alt",
               json{{"used", false}, {"rule", "alpha/(2n) per product term, alpha/2 for the difference total"}}}};
    if (stats.n == 4 && spec.context_index("11") >= 0 && spec.context_index("12") >= 0 &&
        spec.context_index("21") >= 0 && spec.context_index("22") >= 0) {
        // Alternative marginal grouping sometimes quoted for the 4-cycle;
        // recorded for comparison, never used in delta.
        meta["delta_pairing_alt"] =
            json{{"used", false},
                 {"pairs", json::array({json::array({"A@11", "A@22"}), json::array({"B@11", "B@12"}),
                                        json::array({"A@12", "A@21"}), json::array({"B@21", "B@22"})})}};
    }

    const json doc{{"statistics", jstats}, {"report", jreport}, {"metadata", meta}};
    return doc.dump(2) + "\n";
}

std::string scan_to_csv(const std::vector<ScanPoint>& points, double alpha, SVariant variant) {
    std::string out = "W_ns,shift_ns,context,N,product,marg_a,marg_b,s_odd,delta,s_cbd,s_printed,verdict\n";
    for (const auto& pt : points) {
        const SignVector gamma = maximizing_sign_vector(cycle_correlations(pt.table));
        const Interval ci = s_interval(pt.table, alpha, variant, gamma);
        const auto v = verdict(ci, pt.table.spec.n);
        for (std::size_t i = 0; i < pt.table.counts.size(); ++i) {
            const auto& c = pt.table.counts[i];
            char buf[256];
            std::snprintf(buf, sizeof buf, "%" PRId64 ",%" PRId64 ",%s,%" PRIu64 ",%s,%s,%s,%s,%s,%s,%s,%s\n",
                          pt.W_ns, pt.shift_ns, c.context.c_str(), c.total(), format_g12(c.product()).c_str(),
                          format_g12(c.marginal_first()).c_str(), format_g12(c.marginal_second()).c_str(),
                          format_g12(pt.stats.s_odd).c_str(), format_g12(pt.stats.delta).c_str(),
                          format_g12(pt.stats.s_cbd).c_str(), format_g12(pt.stats.s_printed).c_str(),
                          to_string(v.verdict).c_str());
            out += buf;
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("io-error", "cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw_io("io-error", "read failure on '" + path.string() + "'");
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw_io("io-error", "cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw_io("io-error", "write failure on '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw_io("io-error", "cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

}  // namespace spce
