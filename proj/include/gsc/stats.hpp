#pragma once

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "gsc/errors.hpp"

namespace gsc::stats {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw DataError("mean: empty sample");
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

// Unbiased sample variance (divide by n-1); 0 for singleton samples.
inline double sample_variance(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(n - 1);
}

inline double sample_std(const std::vector<double>& xs) { return std::sqrt(sample_variance(xs)); }

// Two-sample two-sided Student's t-test with the pooled equal-variance
// estimator. Degenerate pooled variance: p = 1 when the means are equal,
// p = 0 otherwise.
inline double t_test(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t nA = a.size(), nB = b.size();
    if (nA < 2 || nB < 2) throw DataError("t_test: both samples need size >= 2");
    const double meanA = mean(a), meanB = mean(b);
    const double varA = sample_variance(a), varB = sample_variance(b);
    const double df = static_cast<double>(nA + nB - 2);
    const double pooled =
        ((static_cast<double>(nA - 1)) * varA + (static_cast<double>(nB - 1)) * varB) / df;
    if (pooled == 0.0) return meanA == meanB ? 1.0 : 0.0;
    const double t = (meanA - meanB) /
                     std::sqrt(pooled * (1.0 / static_cast<double>(nA) +
                                         1.0 / static_cast<double>(nB)));
    const boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(dist, -std::abs(t));
}

}  // namespace gsc::stats
