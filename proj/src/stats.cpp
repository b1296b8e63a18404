#include "nearunit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "nearunit/error.hpp"

namespace nearunit::stats {

double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidInput("normal_quantile: probability must lie in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>{}, p);
}

double two_sided_z(double level) {
    if (!(level > 0.0 && level <= 1.0)) {
        throw InvalidInput("confidence level must lie in (0, 1]");
    }
    if (level == 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return normal_quantile(0.5 + 0.5 * level);
}

double student_t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0) || !(df > 0.0)) {
        throw InvalidInput("student_t_quantile: need p in (0, 1) and df > 0");
    }
    return boost::math::quantile(boost::math::students_t_distribution<double>{df}, p);
}

double two_sided_pvalue(double t) noexcept {
    return std::erfc(std::fabs(t) / std::numbers::sqrt2);
}

double mean(std::span<const double> x) noexcept {
    if (x.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    long double s = 0.0L;
    for (double v : x) {
        s += v;
    }
    return static_cast<double>(s / static_cast<long double>(x.size()));
}

double variance(std::span<const double> x) noexcept {
    if (x.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double m = mean(x);
    long double s = 0.0L;
    for (double v : x) {
        s += (v - m) * (v - m);
    }
    return static_cast<double>(s / static_cast<long double>(x.size() - 1));
}

Mat2 covariance(std::span<const double> x, std::span<const double> y) noexcept {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan, nan};
    }
    const double mx = mean(x.first(n));
    const double my = mean(y.first(n));
    long double sxx = 0.0L;
    long double sxy = 0.0L;
    long double syy = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const long double d = static_cast<long double>(n - 1);
    const auto cxy = static_cast<double>(sxy / d);
    return {static_cast<double>(sxx / d), cxy, cxy, static_cast<double>(syy / d)};
}

double quantile_sorted(std::span<const double> sorted, double p) noexcept {
    if (sorted.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> x, double p) {
    std::vector<double> copy(x.begin(), x.end());
    std::sort(copy.begin(), copy.end());
    return quantile_sorted(copy, p);
}

Histogram histogram(std::span<const double> x, std::size_t bins) {
    Histogram h;
    h.counts.assign(std::max<std::size_t>(bins, 1), 0);
    if (x.empty()) {
        return h;
    }
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    h.lo = *mn;
    h.hi = *mx;
    const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
    for (double v : x) {
        std::size_t idx = 0;
        if (width > 0.0) {
            idx = static_cast<std::size_t>((v - h.lo) / width);
        }
        h.counts[std::min(idx, h.counts.size() - 1)] += 1;
    }
    return h;
}

}  // namespace nearunit::stats
