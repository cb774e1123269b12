#pragma once

#include <cstdint>
#include <vector>

#include "finegrain/errors.hpp"

namespace fg {

/// Upper-tail probability of a chi-squared variable: Q(dof/2, x/2).
double chi_squared_upper_tail(double statistic, int dof);

/// Regularized incomplete gamma functions (series / continued fraction).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

struct ChiSquaredResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int dof = 0;
};

/// Pearson goodness-of-fit of observed outcome counts against expected
/// probabilities. Throws on undersampled bins (expected count < 5).
ChiSquaredResult born_chi_squared(const std::vector<std::int64_t>& counts,
                                  const std::vector<double>& expected_probs);

struct Histogram {
    std::vector<double> edges;       ///< size bins + 1; empty when no samples
    std::vector<std::int64_t> counts;
    std::int64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
};

/// Histogram of inter-transition intervals. Each inner vector holds one
/// trajectory's transition times in order; the interval before the first
/// transition counts as a unitary phase too. Zero transitions anywhere is a
/// valid, empty histogram.
Histogram tau_u_histogram(const std::vector<std::vector<double>>& transition_times_per_trajectory,
                          int bins = 20);

} // namespace fg
