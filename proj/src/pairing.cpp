#include "spce/pairing.hpp"

#include <algorithm>
#include <cmath>

#include "spce/errors.hpp"

namespace spce {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Window index range valid under both origins 0 and shift.
std::pair<std::int64_t, std::int64_t> common_window_range(std::uint64_t duration_ns, std::int64_t W,
                                                          std::int64_t shift) {
    const auto T = static_cast<std::int64_t>(duration_ns);
    const std::int64_t k_lo = std::max<std::int64_t>(0, ceil_div(-shift, W));
    const std::int64_t k_hi = std::min(floor_div(T - W, W), floor_div(T - W - shift, W));
    return {k_lo, k_hi};
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;
    double n = 0.0;
};

MarginalGapResult widest_gap_check(const std::vector<MeanVar>& stats, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw_data("invalid-level", "alpha must lie in (0, 1), got " + std::to_string(alpha));
    std::size_t bi = 0, bj = 1;
    double gap = -1.0;
    for (std::size_t i = 0; i < stats.size(); ++i)
        for (std::size_t j = i + 1; j < stats.size(); ++j) {
            const double g = std::abs(stats[i].mean - stats[j].mean);
            if (g > gap) {
                gap = g;
                bi = i;
                bj = j;
            }
        }
    const double diff = stats[bi].mean - stats[bj].mean;
    const double se = std::sqrt(stats[bi].var / stats[bi].n + stats[bj].var / stats[bj].n);
    const double z = normal_quantile(1.0 - alpha / 2.0);

    MarginalGapResult r;
    r.max_marginal_gap = gap;
    r.ci = Interval{diff - z * se, diff + z * se, 1.0 - alpha};
    r.pass = r.ci.contains(0.0);
    return r;
}

}  // namespace

double WindowedSample::marginal_kept() const {
    if (kept_windows == 0) return 0.0;
    std::int64_t sum = 0;
    for (auto v : values) sum += v;
    return static_cast<double>(sum) / static_cast<double>(kept_windows);
}

double WindowedSample::marginal_all() const {
    if (values.empty()) return 0.0;
    std::int64_t sum = 0;
    for (auto v : values) sum += v;
    return static_cast<double>(sum) / static_cast<double>(values.size());
}

double PairedSample::marginal(Side side) const {
    if (pairs.empty()) return 0.0;
    std::int64_t sum = 0;
    for (const auto& [a, b] : pairs) sum += (side == Side::A ? a : b);
    return static_cast<double>(sum) / static_cast<double>(pairs.size());
}

ContextCounts PairedSample::to_counts() const {
    ContextCounts c;
    c.context = context;
    for (const auto& [a, b] : pairs) {
        if (a > 0)
            (b > 0 ? c.n_pp : c.n_pm)++;
        else
            (b > 0 ? c.n_mp : c.n_mm)++;
    }
    return c;
}

WindowedSample window_filter(const TimeTaggedStream& stream, std::int64_t W_ns, std::int64_t shift_ns) {
    if (W_ns < 1) throw_data("config-error", "window width must be >= 1 ns");

    WindowedSample s;
    s.side = stream.side;
    s.setting = stream.setting;
    s.W_ns = W_ns;
    s.shift_ns = shift_ns;

    const auto [k_lo, k_hi] = common_window_range(stream.duration_ns, W_ns, shift_ns);
    s.first_window = k_lo;
    if (k_hi < k_lo) return s;

    const auto count = static_cast<std::size_t>(k_hi - k_lo + 1);
    s.values.assign(count, 0);
    s.discarded.assign(count, 0);

    const std::int64_t origin = stream.side == Side::B ? shift_ns : 0;
    for (const auto& click : stream.clicks) {
        const std::int64_t k = floor_div(click.t_ns - origin, W_ns);
        if (k < k_lo || k > k_hi) continue;
        const auto idx = static_cast<std::size_t>(k - k_lo);
        if (s.discarded[idx]) continue;
        if (s.values[idx] == 0) {
            s.values[idx] = static_cast<std::int8_t>(click.outcome);
        } else {
            s.values[idx] = 0;
            s.discarded[idx] = 1;
        }
    }
    std::uint64_t kept = 0;
    for (auto d : s.discarded)
        if (!d) ++kept;
    s.kept_windows = kept;
    return s;
}

PairedSample coincidence_pair(const WindowedSample& a, const WindowedSample& b, std::string context) {
    if (a.W_ns != b.W_ns || a.shift_ns != b.shift_ns || a.first_window != b.first_window ||
        a.window_count() != b.window_count())
        throw_data("protocol-mismatch", "windowed samples disagree on (W, shift) or the window range");

    PairedSample p;
    p.context = std::move(context);
    p.W_ns = a.W_ns;
    p.shift_ns = a.shift_ns;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        if (a.discarded[k] || b.discarded[k]) continue;
        if (a.values[k] != 0 && b.values[k] != 0) p.pairs.emplace_back(a.values[k], b.values[k]);
    }
    return p;
}

ExpectationTable estimate_table(const std::vector<PairedSample>& paired, const CyclicSystemSpec& spec) {
    spec.validate();
    ExpectationTable table;
    table.spec = spec;
    table.counts.resize(static_cast<std::size_t>(spec.n));
    std::vector<bool> filled(static_cast<std::size_t>(spec.n), false);
    for (const auto& p : paired) {
        const int i = spec.context_index(p.context);
        if (i < 0) throw_data("unknown-context", "paired sample for context '" + p.context + "'");
        if (p.size() == 0) throw_data("empty-context", "context '" + p.context + "' has no coincidences");
        table.counts[static_cast<std::size_t>(i)] = p.to_counts();
        filled[static_cast<std::size_t>(i)] = true;
    }
    for (int i = 0; i < spec.n; ++i)
        if (!filled[static_cast<std::size_t>(i)])
            throw_data("missing-context", "no paired sample for context '" + spec.contexts[static_cast<std::size_t>(i)].id + "'");
    return table;
}

MarginalGapResult nosignaling_check(const std::vector<WindowedSample>& samples, double alpha,
                                    MarginalAveraging averaging) {
    if (samples.size() < 2) throw_data("protocol-mismatch", "need at least two windowed samples to compare");
    for (const auto& s : samples)
        if (s.W_ns != samples[0].W_ns || s.shift_ns != samples[0].shift_ns || s.side != samples[0].side ||
            s.setting != samples[0].setting)
            throw_data("protocol-mismatch", "samples must share side, local setting and (W, shift)");

    std::vector<MeanVar> mv;
    mv.reserve(samples.size());
    for (const auto& s : samples) {
        const bool kept = averaging == MarginalAveraging::kept_windows;
        const double n = kept ? static_cast<double>(s.kept_windows) : static_cast<double>(s.window_count());
        if (n < 2) throw_data("insufficient-data", "windowed sample has fewer than 2 windows");
        const double m = kept ? s.marginal_kept() : s.marginal_all();
        std::int64_t nonzero = 0;
        for (auto v : s.values)
            if (v != 0) ++nonzero;
        const double second_moment = static_cast<double>(nonzero) / n;  // values are 0 or +/-1
        mv.push_back(MeanVar{m, std::max(0.0, second_moment - m * m), n});
    }
    return widest_gap_check(mv, alpha);
}

MarginalGapResult step3_marginal_check(const std::vector<PairedSample>& samples, Side side, double alpha) {
    if (samples.size() < 2) throw_data("protocol-mismatch", "need at least two paired samples to compare");
    std::vector<MeanVar> mv;
    mv.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.size() < 2) throw_data("insufficient-data", "paired sample has fewer than 2 pairs");
        const double m = s.marginal(side);
        mv.push_back(MeanVar{m, std::max(0.0, 1.0 - m * m), static_cast<double>(s.size())});
    }
    return widest_gap_check(mv, alpha);
}

std::vector<ScanPoint> scan(const CyclicSystemSpec& spec, const std::vector<ContextStreams>& streams,
                            const std::vector<std::int64_t>& W_list, const std::vector<std::int64_t>& shift_list) {
    spec.validate();
    if (W_list.empty() || shift_list.empty())
        throw_data("config-error", "window and shift lists must be nonempty");
    if (streams.empty()) throw_data("missing-context", "no context streams supplied");
    for (const auto& cs : streams) {
        if (spec.context_index(cs.context) < 0)
            throw_data("unknown-context", "streams for context '" + cs.context + "'");
        if (cs.a.duration_ns != cs.b.duration_ns)
            throw_data("protocol-mismatch", "context '" + cs.context + "' streams differ in duration");
    }

    std::vector<ScanPoint> out;
    out.reserve(W_list.size() * shift_list.size());
    for (const auto W : W_list) {
        for (const auto shift : shift_list) {
            std::vector<PairedSample> paired;
            paired.reserve(streams.size());
            std::uint64_t total = 0;
            for (const auto& cs : streams) {
                auto pa = window_filter(cs.a, W, shift);
                auto pb = window_filter(cs.b, W, shift);
                auto p = coincidence_pair(pa, pb, cs.context);
                total += p.size();
                paired.push_back(std::move(p));
            }
            ScanPoint pt;
            pt.W_ns = W;
            pt.shift_ns = shift;
            pt.table = estimate_table(paired, spec);
            pt.stats = cbd_statistics(pt.table);
            pt.total_coincidences = total;
            out.push_back(std::move(pt));
        }
    }
    return out;
}

std::pair<std::int64_t, std::int64_t> optimal_window(const std::vector<ScanPoint>& points) {
    if (points.empty()) throw_data("empty-scan", "no scan points to choose from");
    const ScanPoint* best = &points.front();
    for (const auto& p : points) {
        if (p.total_coincidences > best->total_coincidences ||
            (p.total_coincidences == best->total_coincidences &&
             (p.W_ns < best->W_ns || (p.W_ns == best->W_ns && p.shift_ns < best->shift_ns))))
            best = &p;
    }
    return {best->W_ns, best->shift_ns};
}

}  // namespace spce
