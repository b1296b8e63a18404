#pragma once

#include <span>
#include <vector>

#include "nearunit/linalg.hpp"

namespace nearunit::stats {

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double x) noexcept;

/// Standard normal quantile.
[[nodiscard]] double normal_quantile(double p);

/// Two-sided normal critical value for a central interval at `level`
/// (level 0.90 gives 1.6448536...). level == 1 gives +infinity.
[[nodiscard]] double two_sided_z(double level);

/// Student-t quantile with `df` degrees of freedom.
[[nodiscard]] double student_t_quantile(double p, double df);

/// Two-sided normal p-value 2(1 - Phi(|t|)).
[[nodiscard]] double two_sided_pvalue(double t) noexcept;

[[nodiscard]] double mean(std::span<const double> x) noexcept;

/// Unbiased (n-1) sample variance; NaN when fewer than two values.
[[nodiscard]] double variance(std::span<const double> x) noexcept;

/// Unbiased sample covariance matrix of two equally long columns.
[[nodiscard]] Mat2 covariance(std::span<const double> x, std::span<const double> y) noexcept;

/// Empirical quantile with linear interpolation between order statistics
/// (type-7 definition). `sorted` must be ascending.
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double p) noexcept;

/// Convenience overload; copies and sorts.
[[nodiscard]] double quantile(std::span<const double> x, double p);

/// Equal-width histogram over [lo, hi]; values outside are clamped to the end bins.
struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> counts;
};

[[nodiscard]] Histogram histogram(std::span<const double> x, std::size_t bins);

}  // namespace nearunit::stats
