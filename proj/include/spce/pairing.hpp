#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spce/inequalities.hpp"
#include "spce/model.hpp"
#include "spce/simulator.hpp"
#include "spce/statistics.hpp"

namespace spce {

// Step-2 data: one value per synchronized window, 0 meaning "no click kept".
// Windows holding two or more clicks on this side are discarded outright and
// excluded from kept_windows and from pairing.
struct WindowedSample {
    Side side = Side::A;
    std::string setting;
    std::int64_t W_ns = 1;
    std::int64_t shift_ns = 0;      // protocol shift Delta (applied to side B's origin)
    std::int64_t first_window = 0;  // lowest window index valid on both sides
    std::vector<std::int8_t> values;     // -1 / 0 / +1 per window
    std::vector<std::uint8_t> discarded; // multi-click windows
    std::uint64_t kept_windows = 0;      // windows not discarded (zeros count)

    std::size_t window_count() const { return values.size(); }
    // Mean over kept windows (zeros included in the average).
    double marginal_kept() const;
    // Alternative averaging over all windows including discarded ones.
    double marginal_all() const;
};

// Step-3 data: the coincidence-paired +/-1 outcomes of one context.
struct PairedSample {
    std::string context;
    std::int64_t W_ns = 1;
    std::int64_t shift_ns = 0;
    std::vector<std::pair<std::int8_t, std::int8_t>> pairs;

    std::uint64_t size() const { return pairs.size(); }
    double marginal(Side side) const;
    ContextCounts to_counts() const;
};

// Splits the timeline into half-open windows [k*W + origin, (k+1)*W + origin)
// where origin is shift_ns for side B and 0 for side A. Only window indices
// whose spans fit inside [0, duration) under BOTH origins are used, so the
// two sides of a run always agree on the index range.
WindowedSample window_filter(const TimeTaggedStream& stream, std::int64_t W_ns, std::int64_t shift_ns);

// Keeps exactly the windows where both sides hold a single click.
// Both samples must share (W_ns, shift_ns) and the window range.
PairedSample coincidence_pair(const WindowedSample& a, const WindowedSample& b, std::string context = {});

// Builds the counts table from one paired sample per context.
ExpectationTable estimate_table(const std::vector<PairedSample>& paired, const CyclicSystemSpec& spec);

enum class MarginalAveraging { kept_windows, all_windows };

struct MarginalGapResult {
    double max_marginal_gap = 0.0;
    Interval ci;      // two-sided CI for the widest-gap difference
    bool pass = true; // CI contains 0
};

// Parameter-independence check on step-2 samples of one side under a fixed
// local setting: the windowed marginal must not depend on the remote
// setting. Takes two or more samples sharing (W, shift); pass iff the
// widest pairwise difference is compatible with 0 at level alpha.
MarginalGapResult nosignaling_check(const std::vector<WindowedSample>& samples, double alpha,
                                    MarginalAveraging averaging = MarginalAveraging::kept_windows);

// The same comparison applied to step-3 (post-pairing) marginals of one
// side. For setting-dependent protocols this is where the remote-setting
// dependence shows up.
MarginalGapResult step3_marginal_check(const std::vector<PairedSample>& samples, Side side, double alpha);

struct ContextStreams {
    std::string context;
    TimeTaggedStream a;
    TimeTaggedStream b;
};

struct ScanPoint {
    std::int64_t W_ns = 1;
    std::int64_t shift_ns = 0;
    ExpectationTable table;
    CbdStatistics stats;
    std::uint64_t total_coincidences = 0;
};

// Full pipeline (window -> pair -> estimate -> statistics) per (W, Delta)
// grid point, in the given list order (W outer loop). Pure function of the
// inputs; duplicated entries produce duplicated rows.
std::vector<ScanPoint> scan(const CyclicSystemSpec& spec, const std::vector<ContextStreams>& streams,
                            const std::vector<std::int64_t>& W_list, const std::vector<std::int64_t>& shift_list);

// Grid point with the most total coincidences; ties resolved toward the
// smallest W, then the smallest shift.
std::pair<std::int64_t, std::int64_t> optimal_window(const std::vector<ScanPoint>& points);

}  // namespace spce
