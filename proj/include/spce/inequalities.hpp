#pragma once

#include <vector>

#include "spce/model.hpp"

namespace spce {

// Length-n vector of +/-1 signs with an odd number of -1 entries.
using SignVector = std::vector<int>;

// All 2^(n-1) odd sign vectors, in ascending bitmask order: vectors are
// enumerated by an integer mask k, bit i of k set meaning entry i is -1, and
// only odd-popcount masks kept. For n=3 this yields
// (-1,1,1),(1,-1,1),(1,1,-1),(-1,-1,-1).
std::vector<SignVector> odd_sign_vectors(int n);

// Maximum over all odd sign vectors of sum_i gamma_i * c_i. Closed form:
// sum |c_i| when the number of strictly negative entries is odd, otherwise
// sum |c_i| - 2 * min |c_i|. Requires n >= 3 and entries in [-1, 1].
double s_odd(const std::vector<double>& correlations);

// Same maximum by explicit enumeration of all 2^(n-1) odd sign vectors.
// Kept as the slow cross-check route for the closed form.
double s_odd_brute_force(const std::vector<double>& correlations);

// An odd sign vector attaining s_odd: signs of the entries, with the
// smallest-|c_i| entry flipped when the negative count is even
// (first such index on ties).
SignVector maximizing_sign_vector(const std::vector<double>& correlations);

struct NciResult {
    double s_odd = 0.0;
    double bound = 0.0;      // n - 2
    bool violated = false;   // strict: s_odd > n - 2
    double margin = 0.0;     // s_odd - (n - 2)
};

// Cyclic noncontextuality check: satisfied by any joint +/-1 assignment.
NciResult nci_check(const std::vector<double>& correlations);

// Feasible range of <AB> for jointly distributed +/-1 variables with fixed
// marginal expectations: [|mA + mB| - 1, 1 - |mA - mB|]. Never empty.
struct CouplingRange {
    double lo = 0.0;
    double hi = 0.0;
};
CouplingRange coupling_range(double mA, double mB);

// Largest <AB> consistent with the marginals: 1 - |mA - mB|. Equals 1
// (identical coupling) exactly when the marginals agree.
double max_coupling(double mA, double mB);

// Sum over contents of |<X>_context1 - <X>_context2|, the total failure of
// marginal selectivity across the cycle. Zero iff the system is
// consistently connected.
double marginal_delta(const ExpectationTable& table);

struct CbdStatistics {
    int n = 0;
    double s_odd = 0.0;
    double delta = 0.0;          // marginal_delta of the table
    double s_cbd = 0.0;          // s_odd - delta (coupling-consistent form)
    double s_printed = 0.0;      // s_odd + delta (additive variant)
    double bound = 0.0;          // n - 2
    double chsh_s = 0.0;         // n = 4 only: c0 + c1 + c2 - c3 in cycle order
    bool has_chsh = false;
    double trivial_bound = 0.0;  // n: |sum gamma_i c_i| can never exceed it
    bool cycle_violated = false;   // s_odd > n - 2
    bool cbd_contextual = false;   // s_cbd > n - 2 (default variant)
};

enum class SVariant { s_cbd, s_printed };

// Point statistics of a counts table: s_odd over the cycle correlations,
// the marginal-inconsistency total, and both corrected statistics.
CbdStatistics cbd_statistics(const ExpectationTable& table);

// Value of the variant actually selected for reporting.
double selected_statistic(const CbdStatistics& s, SVariant v);

struct CoupledCycleResult {
    double max_lhs = 0.0;   // max over odd gamma of sum gamma_i cross_i + sum couplings_i
    double bound = 0.0;     // 2n - 2
    bool satisfied = true;  // max_lhs <= 2n - 2
};

// 2n-cycle check on cross-context correlations plus content-sharing
// couplings. With couplings set to their maximal values this reproduces the
// s_cbd <= n - 2 verdict.
CoupledCycleResult coupled_cycle_check(const std::vector<double>& cross, const std::vector<double>& couplings);

}  // namespace spce
