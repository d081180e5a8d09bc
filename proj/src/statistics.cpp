#include "spce/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "spce/errors.hpp"

namespace spce {

namespace {
double combined_level(double la, double lb) {
    // Bonferroni: alphas add, capped at certainty loss.
    return std::max(0.0, la + lb - 1.0);
}
}  // namespace

Interval interval_add(const Interval& a, const Interval& b) {
    return Interval{a.lo + b.lo, a.hi + b.hi, combined_level(a.level, b.level)};
}

Interval interval_neg(const Interval& a) { return Interval{-a.hi, -a.lo, a.level}; }

Interval interval_sub(const Interval& a, const Interval& b) { return interval_add(a, interval_neg(b)); }

// PPND7/PPND16 hybrid (Wichura, AS 241): piecewise rational in the central
// and tail regions.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.5) return 0.0;
        throw_data("invalid-level", "quantile argument must lie in (0, 1), got " + std::to_string(p));
    }
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num = (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                                 6.7265770927008700853e+4) *
                                    r +
                                4.5921953931549871457e+4) *
                                   r +
                               1.3731693765509461125e+4) *
                                  r +
                              1.9715909503065514427e+3) *
                                 r +
                             1.3314166789178437745e+2) *
                                r +
                            3.3871328727963666080e+0);
        const double den = (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                                 3.9307895800092710610e+4) *
                                    r +
                                2.1213794301586595867e+4) *
                                   r +
                               5.3941960214247511077e+3) *
                                  r +
                              6.8718700749205790830e+2) *
                                 r +
                             4.2313330701600911252e+1) *
                                r +
                            1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                                 2.41780725177450611770e-1) *
                                    r +
                                1.27045825245236838258e+0) *
                                   r +
                               3.64784832476320460504e+0) *
                                  r +
                              5.76949722146069140550e+0) *
                                 r +
                             4.63033784615654529590e+0) *
                                r +
                            1.42343711074968357734e+0);
        const double den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                                 1.51986665636164571966e-2) *
                                    r +
                                1.48103976427480074590e-1) *
                                   r +
                               6.89767334985100004550e-1) *
                                  r +
                              1.67638483018380384940e+0) *
                                 r +
                             2.05319162663775882187e+0) *
                                r +
                            1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                                 1.24266094738807843860e-3) *
                                    r +
                                2.65321895265761230930e-2) *
                                   r +
                               2.96560571828504891230e-1) *
                                  r +
                              1.78482653991729133580e+0) *
                                 r +
                             5.46378491116411436990e+0) *
                                r +
                            6.65790464350110377720e+0);
        const double den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                                 1.84631831751005468180e-5) *
                                    r +
                                7.86869131145613259100e-4) *
                                   r +
                               1.48753612908506148525e-2) *
                                  r +
                              1.36929880922735805310e-1) *
                                 r +
                             5.99832206555887937690e-1) *
                                r +
                            1.0);
        val = num / den;
    }
    return q < 0.0 ? -val : val;
}

Interval mean_ci(const ContextCounts& counts, MeanKind which, double alpha_term) {
    const auto N = counts.total();
    if (N < 2) throw_data("insufficient-data", "context '" + counts.context + "' has N < 2");
    if (!(alpha_term > 0.0 && alpha_term < 1.0))
        throw_data("invalid-level", "alpha_term must lie in (0, 1), got " + std::to_string(alpha_term));

    double m = 0.0;
    switch (which) {
        case MeanKind::product: m = counts.product(); break;
        case MeanKind::marginal_first: m = counts.marginal_first(); break;
        case MeanKind::marginal_second: m = counts.marginal_second(); break;
    }
    const double var = std::max(0.0, 1.0 - m * m);
    const double z = normal_quantile(1.0 - alpha_term / 2.0);
    const double hw = z * std::sqrt(var / static_cast<double>(N));
    return Interval{std::max(-1.0, m - hw), std::min(1.0, m + hw), 1.0 - alpha_term};
}

Interval abs_diff_ci(const Interval& a, const Interval& b) {
    const Interval d = interval_sub(a, b);
    const double alo = std::abs(d.lo), ahi = std::abs(d.hi);
    if (d.lo <= 0.0 && 0.0 <= d.hi) return Interval{0.0, std::max(alo, ahi), d.level};
    return Interval{std::min(alo, ahi), std::max(alo, ahi), d.level};
}

Interval s_interval(const ExpectationTable& table, double alpha, SVariant variant, const SignVector& gamma) {
    require_valid(table);
    const int n = table.spec.n;
    if (static_cast<int>(gamma.size()) != n) throw_data("shape-error", "gamma length must equal the cycle rank");
    int negatives = 0;
    for (int g : gamma) {
        if (g != 1 && g != -1) throw_data("shape-error", "gamma entries must be +/-1");
        if (g == -1) ++negatives;
    }
    if ((negatives & 1) == 0) throw_data("shape-error", "gamma must have an odd number of -1 entries");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw_data("invalid-level", "alpha must lie in (0, 1), got " + std::to_string(alpha));

    const double alpha_product = alpha / (2.0 * n);
    const double alpha_marginal = alpha / (4.0 * n);

    Interval acc{0.0, 0.0, 1.0};
    for (int i = 0; i < n; ++i) {
        const Interval ci = mean_ci(table.counts_for(i), MeanKind::product, alpha_product);
        acc = interval_add(acc, gamma[static_cast<std::size_t>(i)] == 1 ? ci : interval_neg(ci));
    }
    for (const auto& slot : table.spec.content_slots()) {
        const Interval ma = mean_ci(table.counts_for(slot.ctx_a),
                                    slot.slot_a == 0 ? MeanKind::marginal_first : MeanKind::marginal_second,
                                    alpha_marginal);
        const Interval mb = mean_ci(table.counts_for(slot.ctx_b),
                                    slot.slot_b == 0 ? MeanKind::marginal_first : MeanKind::marginal_second,
                                    alpha_marginal);
        const Interval diff = abs_diff_ci(ma, mb);
        acc = variant == SVariant::s_cbd ? interval_sub(acc, diff) : interval_add(acc, diff);
    }
    return acc;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::strongly_contextual: return "strongly-contextual";
        case Verdict::maximally_noncontextual_description: return "maximally-noncontextual-description";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

VerdictReport verdict(const Interval& interval_s, int n) {
    VerdictReport r;
    r.interval_s = interval_s;
    r.bound = static_cast<double>(n) - 2.0;
    if (interval_s.lo > r.bound)
        r.verdict = Verdict::strongly_contextual;
    else if (interval_s.hi < r.bound)
        r.verdict = Verdict::maximally_noncontextual_description;
    else
        r.verdict = Verdict::inconclusive;
    return r;
}

}  // namespace spce
