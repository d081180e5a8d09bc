#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spce/model.hpp"
#include "spce/pairing.hpp"
#include "spce/simulator.hpp"
#include "spce/statistics.hpp"

namespace spce {

// --- raw stream files -------------------------------------------------
// Header "# side=<A|B> setting=<label> seed=<u64> duration_ns=<u64>
// model=<id>", then one "t_ns,outcome" line per click with outcome written
// as +1 or -1, ascending t_ns, LF endings.

std::string format_stream(const TimeTaggedStream& stream);
TimeTaggedStream parse_stream(const std::string& text, const std::string& source_name);

// --- paired-sample files ----------------------------------------------
// Header "# context=<id> W_ns=<int> shift_ns=<int>", then "a,b" lines.

std::string format_paired(const PairedSample& sample);
PairedSample parse_paired(const std::string& text, const std::string& source_name);

// --- expectation-table JSON ---------------------------------------------
// {"n": int, "contexts": [{"id": str, "members": [str, str],
//   "counts": {"pp": int, "pm": int, "mp": int, "mm": int}}]}

std::string table_to_json(const ExpectationTable& table);
ExpectationTable table_from_json(const std::string& text, const std::string& source_name);

// --- analysis report JSON -------------------------------------------------
// Bundles the point statistics, the interval verdict
// ({"s_lo","s_hi","bound","verdict","alpha","variant","gamma",
// "post_hoc_gamma"}) and the reporting conventions in force.

std::string report_to_json(const CbdStatistics& stats, const VerdictReport& report,
                           const CyclicSystemSpec& spec);

// --- scan CSV ------------------------------------------------------------
// Columns: W_ns,shift_ns,context,N,product,marg_a,marg_b,s_odd,delta,
// s_cbd,s_printed,verdict — one row per (grid point, context); the verdict
// is the interval verdict of the whole grid point at the given alpha.

std::string scan_to_csv(const std::vector<ScanPoint>& points, double alpha, SVariant variant);

// --- filesystem helpers ----------------------------------------------------

std::string read_file(const std::filesystem::path& path);
// Write-then-rename so partially written outputs are never observed.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Fixed 12-significant-digit rendering used for all human-facing numbers.
std::string format_g12(double x);

std::string to_string(SVariant v);
SVariant parse_variant(const std::string& s);  // throws config-error

}  // namespace spce
