#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace spce {

// A content is the question a random variable answers ("Alice's outcome at
// setting 1"). Contents are opaque labels; the bundled EPRB vocabulary is
// "A1","A2","B1","B2".
using ContentId = std::string;

// A context is a joint measurement of exactly two distinct contents.
struct Context {
    std::string id;
    std::array<ContentId, 2> members;
};

// An n-cycle of pairwise-measured binary variables: n contexts listed in
// cycle order, adjacent contexts (mod n) sharing exactly one content and
// every content appearing in exactly two contexts.
struct CyclicSystemSpec {
    int n = 0;
    std::vector<Context> contexts;

    // Throws "invalid-rank" / "cycle-broken" / "content-degree" /
    // "duplicate-context" on a malformed description.
    void validate() const;

    int context_index(const std::string& id) const;  // -1 if absent

    // For each content, its two (context index, member slot) occurrences,
    // in cycle order. Requires a valid spec.
    struct ContentSlot {
        ContentId content;
        int ctx_a, slot_a;
        int ctx_b, slot_b;
    };
    std::vector<ContentSlot> content_slots() const;
};

// The standard EPRB 4-cycle. The cycle is listed so the doubly-primed
// context "22" sits in the minus position of the fixed CHSH sign pattern
// (+,+,+,-): contexts ("12","11","21","22") with members
// (A1,B2),(A1,B1),(A2,B1),(A2,B2).
CyclicSystemSpec eprb_system();

// Paired +/-1 outcome counts for one context. Expectations are always
// derived from these integers, never stored as floats of record.
struct ContextCounts {
    std::string context;
    std::uint64_t n_pp = 0, n_pm = 0, n_mp = 0, n_mm = 0;

    std::uint64_t total() const { return n_pp + n_pm + n_mp + n_mm; }

    // <XY> = (pp + mm - pm - mp) / N
    double product() const;
    // <X> = (pp + pm - mp - mm) / N   (first member of the context)
    double marginal_first() const;
    // <Y> = (pp + mp - pm - mm) / N   (second member)
    double marginal_second() const;
};

struct ExpectationTable {
    CyclicSystemSpec spec;
    std::vector<ContextCounts> counts;  // one per context, cycle order

    const ContextCounts& counts_for(int ctx_index) const { return counts.at(static_cast<std::size_t>(ctx_index)); }
};

struct Violation {
    std::string code;    // "missing-context", "empty-context", ...
    std::string detail;
};

// Returns every invariant breach of the table; empty means the table is
// usable by all downstream estimation. Never throws: diagnostics are the
// return value. Idempotent and side-effect free.
std::vector<Violation> validate_table(const ExpectationTable& table);

// Throws "table-invalid" listing the violation codes if any exist.
void require_valid(const ExpectationTable& table);

// Product expectations in cycle order (requires a valid table).
std::vector<double> cycle_correlations(const ExpectationTable& table);

}  // namespace spce
