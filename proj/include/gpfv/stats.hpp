#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gpfv {

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;  ///< sd / sqrt(n)
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double ci_level = 0.95;
};

/// Mean, sample sd (n - 1), SE and normal-approximation CI.
Summary summarize(std::span<const double> xs, double ci_level = 0.95);

/// sqrt(a.se^2 + b.se^2).
double pooled_se(const Summary& a, const Summary& b);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// Total variation between the two empirical laws binned on `bins` equal
/// cells over the pooled range.
double binned_tv(std::span<const double> a, std::span<const double> b, std::size_t bins = 64);

/// Upper tail p-value of Pearson's statistic against the expected counts
/// (degrees of freedom = cells - 1 - fitted).
double chi_square_pvalue(std::span<const double> observed, std::span<const double> expected,
                         std::size_t fitted = 0);

/// Pearson statistic itself.
double chi_square_statistic(std::span<const double> observed, std::span<const double> expected);

struct ExponentialFit {
    double rate = 0.0;       ///< -slope of log y against t
    double intercept = 0.0;  ///< log y at t = 0
    std::size_t points = 0;
};

/// Least squares on log y; entries with y <= 0 are skipped.
ExponentialFit fit_exponential_decay(std::span<const double> t, std::span<const double> y);

}  // namespace gpfv
