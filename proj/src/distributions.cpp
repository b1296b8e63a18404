#include "nearunit/distributions.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace nearunit::distr {

namespace {

constexpr int kTableSize = 256;

std::array<double, kTableSize> make_log_factorial_table() {
    std::array<double, kTableSize> table{};
    table[0] = 0.0;
    for (int i = 1; i < kTableSize; ++i) {
        table[i] = table[i - 1] + std::log(static_cast<double>(i));
    }
    return table;
}

const std::array<double, kTableSize>& log_factorial_table() {
    static const auto table = make_log_factorial_table();
    return table;
}

// log k! - (k log k - k + 0.5 log(2 pi k)); asymptotic series, |err| < 1e-12 for k >= 10.
double stirling_correction(double k) noexcept {
    const double inv = 1.0 / k;
    const double inv2 = inv * inv;
    return inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

double poisson_small(Stream& rng, double mean) noexcept {
    const double limit = std::exp(-mean);
    double prod = rng.uniform();
    double k = 0.0;
    while (prod > limit) {
        prod *= rng.uniform();
        k += 1.0;
    }
    return k;
}

// W. Hoermann (1993), "The transformed rejection method for generating Poisson
// random variables", Insurance: Mathematics and Economics 12, 39-45.
double poisson_ptrs(Stream& rng, double mean) noexcept {
    const double slam = std::sqrt(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double log_inv_alpha = std::log(inv_alpha);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) {
            return k;
        }
        if (k < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v) + log_inv_alpha - std::log(a / (us * us) + b) <= poisson_log_pmf(k, mean)) {
            return k;
        }
    }
}

double gamma_marsaglia_tsang(Stream& rng, double shape) noexcept {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

}  // namespace

double log_factorial(double k) noexcept {
    if (k < kTableSize) {
        return log_factorial_table()[static_cast<int>(k)];
    }
    return k * std::log(k) - k + 0.5 * std::log(2.0 * std::numbers::pi * k) + stirling_correction(k);
}

double poisson_log_pmf(double k, double mean) noexcept {
    if (mean <= 0.0) {
        return k == 0.0 ? 0.0 : -INFINITY;
    }
    if (k < 10.0) {
        return -mean + k * std::log(mean) - log_factorial(k);
    }
    const double d = k - mean;
    return d - k * std::log1p(d / mean) - 0.5 * std::log(2.0 * std::numbers::pi * k) -
           stirling_correction(k);
}

double poisson(Stream& rng, double mean) noexcept {
    if (!(mean > 0.0)) {
        return 0.0;
    }
    if (mean < 10.0) {
        return poisson_small(rng, mean);
    }
    if (mean <= kPoissonExactLimit) {
        return poisson_ptrs(rng, mean);
    }
    const double draw = std::round(mean + std::sqrt(mean) * rng.normal());
    return draw < 0.0 ? 0.0 : draw;
}

double gamma(Stream& rng, double shape, double scale) noexcept {
    if (shape <= 0.0 || scale <= 0.0) {
        return 0.0;
    }
    if (shape < 1.0) {
        const double boost = std::pow(rng.uniform(), 1.0 / shape);
        return gamma_marsaglia_tsang(rng, shape + 1.0) * boost * scale;
    }
    return gamma_marsaglia_tsang(rng, shape) * scale;
}

}  // namespace nearunit::distr
