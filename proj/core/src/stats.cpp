#include "finegrain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fg {

namespace {

// Lower regularized gamma by series expansion; valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
    return sum * std::exp(log_prefix);
}

// Upper regularized gamma by Lentz continued fraction; valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
    return h * std::exp(log_prefix);
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_squared_upper_tail(double statistic, int dof) {
    if (dof < 1) throw std::invalid_argument("chi_squared_upper_tail: dof must be >= 1");
    if (statistic < 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquaredResult born_chi_squared(const std::vector<std::int64_t>& counts,
                                  const std::vector<double>& expected_probs) {
    if (counts.size() != expected_probs.size() || counts.size() < 2)
        throw std::invalid_argument("born_chi_squared: need matching lists of >= 2 outcomes");
    std::int64_t total = 0;
    for (auto c : counts) {
        if (c < 0) throw std::invalid_argument("born_chi_squared: negative count");
        total += c;
    }
    ChiSquaredResult r;
    r.dof = static_cast<int>(counts.size()) - 1;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = expected_probs[i] * static_cast<double>(total);
        if (expected < 5.0)
            throw std::invalid_argument("born_chi_squared: undersampled bin " +
                                        std::to_string(i) + " (expected count < 5)");
        const double diff = static_cast<double>(counts[i]) - expected;
        r.statistic += diff * diff / expected;
    }
    r.p_value = chi_squared_upper_tail(r.statistic, r.dof);
    return r;
}

Histogram tau_u_histogram(const std::vector<std::vector<double>>& per_trajectory, int bins) {
    std::vector<double> intervals;
    for (const auto& times : per_trajectory) {
        double prev = 0.0;
        for (double t : times) {
            intervals.push_back(t - prev);
            prev = t;
        }
    }
    Histogram h;
    h.n = static_cast<std::int64_t>(intervals.size());
    if (intervals.empty()) return h;

    double sum = 0.0;
    for (double v : intervals) sum += v;
    h.mean = sum / static_cast<double>(intervals.size());
    double var = 0.0;
    for (double v : intervals) var += (v - h.mean) * (v - h.mean);
    h.variance = intervals.size() > 1 ? var / static_cast<double>(intervals.size() - 1) : 0.0;

    const auto [mn, mx] = std::minmax_element(intervals.begin(), intervals.end());
    double lo = *mn, hi = *mx;
    if (hi - lo < 1e-15) hi = lo + 1e-15; // degenerate: all intervals equal
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : intervals) {
        int idx = static_cast<int>((v - lo) / (hi - lo) * bins);
        idx = std::clamp(idx, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    return h;
}

} // namespace fg
