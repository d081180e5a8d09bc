#include "spce/inequalities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "spce/errors.hpp"

namespace spce {

namespace {

void check_rank(std::size_t n) {
    if (n < 3) throw_data("invalid-rank", "need at least 3 entries, got " + std::to_string(n));
    if (n > 62) throw_data("invalid-rank", "cycle rank " + std::to_string(n) + " not supported");
}

void check_unit_range(const std::vector<double>& v, const char* code) {
    for (double x : v)
        if (!(x >= -1.0 && x <= 1.0)) throw_data(code, "entry " + std::to_string(x) + " outside [-1, 1]");
}

}  // namespace

std::vector<SignVector> odd_sign_vectors(int n) {
    check_rank(n < 0 ? 0u : static_cast<std::size_t>(n));
    std::vector<SignVector> out;
    out.reserve(1ULL << (n - 1));
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        if ((std::popcount(mask) & 1u) == 0) continue;
        SignVector v(static_cast<std::size_t>(n), 1);
        for (int i = 0; i < n; ++i)
            if (mask & (1ULL << i)) v[static_cast<std::size_t>(i)] = -1;
        out.push_back(std::move(v));
    }
    return out;
}

double s_odd(const std::vector<double>& correlations) {
    check_rank(correlations.size());
    check_unit_range(correlations, "invalid-correlation");

    double abs_sum = 0.0;
    double min_abs = std::numeric_limits<double>::infinity();
    int negatives = 0;
    for (double c : correlations) {
        abs_sum += std::abs(c);
        min_abs = std::min(min_abs, std::abs(c));
        if (c < 0.0) ++negatives;
    }
    return (negatives & 1) ? abs_sum : abs_sum - 2.0 * min_abs;
}

double s_odd_brute_force(const std::vector<double>& correlations) {
    check_rank(correlations.size());
    check_unit_range(correlations, "invalid-correlation");

    const int n = static_cast<int>(correlations.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        if ((std::popcount(mask) & 1u) == 0) continue;
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += (mask & (1ULL << i)) ? -correlations[static_cast<std::size_t>(i)]
                                      : correlations[static_cast<std::size_t>(i)];
        best = std::max(best, s);
    }
    return best;
}

SignVector maximizing_sign_vector(const std::vector<double>& correlations) {
    check_rank(correlations.size());
    check_unit_range(correlations, "invalid-correlation");

    const std::size_t n = correlations.size();
    SignVector gamma(n);
    int negatives = 0;
    std::size_t flip = 0;
    double min_abs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        gamma[i] = (correlations[i] < 0.0) ? -1 : 1;
        if (gamma[i] < 0) ++negatives;
        if (std::abs(correlations[i]) < min_abs) {
            min_abs = std::abs(correlations[i]);
            flip = i;
        }
    }
    if ((negatives & 1) == 0) gamma[flip] = -gamma[flip];
    return gamma;
}

NciResult nci_check(const std::vector<double>& correlations) {
    NciResult r;
    r.s_odd = s_odd(correlations);
    r.bound = static_cast<double>(correlations.size()) - 2.0;
    r.margin = r.s_odd - r.bound;
    r.violated = r.s_odd > r.bound;
    return r;
}

CouplingRange coupling_range(double mA, double mB) {
    if (!(mA >= -1.0 && mA <= 1.0) || !(mB >= -1.0 && mB <= 1.0))
        throw_data("invalid-marginal", "marginals must lie in [-1, 1]");
    return CouplingRange{std::abs(mA + mB) - 1.0, 1.0 - std::abs(mA - mB)};
}

double max_coupling(double mA, double mB) { return coupling_range(mA, mB).hi; }

double marginal_delta(const ExpectationTable& table) {
    require_valid(table);
    double delta = 0.0;
    for (const auto& slot : table.spec.content_slots()) {
        const auto& ca = table.counts_for(slot.ctx_a);
        const auto& cb = table.counts_for(slot.ctx_b);
        const double ma = slot.slot_a == 0 ? ca.marginal_first() : ca.marginal_second();
        const double mb = slot.slot_b == 0 ? cb.marginal_first() : cb.marginal_second();
        delta += std::abs(ma - mb);
    }
    return delta;
}

CbdStatistics cbd_statistics(const ExpectationTable& table) {
    CbdStatistics s;
    const auto corr = cycle_correlations(table);  // validates
    s.n = table.spec.n;
    s.s_odd = s_odd(corr);
    s.delta = marginal_delta(table);
    s.s_cbd = s.s_odd - s.delta;
    s.s_printed = s.s_odd + s.delta;
    s.bound = static_cast<double>(s.n) - 2.0;
    s.trivial_bound = static_cast<double>(s.n);
    if (s.n == 4) {
        s.has_chsh = true;
        s.chsh_s = corr[0] + corr[1] + corr[2] - corr[3];
    }
    s.cycle_violated = s.s_odd > s.bound;
    s.cbd_contextual = s.s_cbd > s.bound;
    return s;
}

double selected_statistic(const CbdStatistics& s, SVariant v) {
    return v == SVariant::s_cbd ? s.s_cbd : s.s_printed;
}

CoupledCycleResult coupled_cycle_check(const std::vector<double>& cross, const std::vector<double>& couplings) {
    if (cross.size() != couplings.size())
        throw_data("shape-error", "cross terms (" + std::to_string(cross.size()) + ") and couplings (" +
                                      std::to_string(couplings.size()) + ") differ in length");
    check_rank(cross.size());
    check_unit_range(cross, "invalid-correlation");
    check_unit_range(couplings, "invalid-correlation");

    double coupling_sum = 0.0;
    for (double c : couplings) coupling_sum += c;

    CoupledCycleResult r;
    r.max_lhs = s_odd(cross) + coupling_sum;
    r.bound = 2.0 * static_cast<double>(cross.size()) - 2.0;
    r.satisfied = r.max_lhs <= r.bound;
    return r;
}

}  // namespace spce
