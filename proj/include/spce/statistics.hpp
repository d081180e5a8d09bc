#pragma once

#include <string>
#include <vector>

#include "spce/inequalities.hpp"
#include "spce/model.hpp"

namespace spce {

// Closed interval [lo, hi] with the nominal confidence share (1 - alpha)
// that was spent building it. Arithmetic combines shares by Bonferroni.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 1.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

Interval interval_add(const Interval& a, const Interval& b);
Interval interval_neg(const Interval& a);
Interval interval_sub(const Interval& a, const Interval& b);

// Standard normal quantile (inverse CDF), Wichura's rational approximation.
// Absolute error well below 1e-8 over (0, 1).
double normal_quantile(double p);

enum class MeanKind { product, marginal_first, marginal_second };

// Two-sided Wald interval m +/- z_{1-alpha/2} * sqrt((1-m^2)/N) for a
// +/-1-valued mean derived from counts, clipped to [-1, 1]. Requires N >= 2.
Interval mean_ci(const ContextCounts& counts, MeanKind which, double alpha_term);

// Image of interval_sub(a, b) under absolute value: [0, max(|lo|,|hi|)] when
// the difference straddles zero, else [min(|lo|,|hi|), max(|lo|,|hi|)].
Interval abs_diff_ci(const Interval& a, const Interval& b);

// Conservative Bonferroni interval for the selected S statistic: the n
// product terms at level alpha/(2n) each, the n content-sharing |difference|
// terms at alpha/(2n) each (two marginal intervals at alpha/(4n)), combined
// by interval arithmetic with the gamma signs on product terms and the
// variant's sign on the difference terms. Total budget <= alpha.
Interval s_interval(const ExpectationTable& table, double alpha, SVariant variant, const SignVector& gamma);

enum class Verdict { strongly_contextual, maximally_noncontextual_description, inconclusive };

std::string to_string(Verdict v);

struct VerdictReport {
    Interval interval_s;
    double bound = 0.0;  // n - 2
    Verdict verdict = Verdict::inconclusive;
    double alpha = 0.0;
    SVariant variant = SVariant::s_cbd;
    SignVector gamma;
    bool post_hoc_gamma = false;  // gamma chosen from the data (s_odd maximizer)
};

// strongly-contextual iff lo > n-2; maximally-noncontextual-description iff
// hi < n-2; boundary equality is inconclusive.
VerdictReport verdict(const Interval& interval_s, int n);

}  // namespace spce
