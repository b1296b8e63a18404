#include "nearunit/cir.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nearunit/distributions.hpp"
#include "nearunit/error.hpp"
#include "nearunit/parallel.hpp"

namespace nearunit::cir {

void CirParams::validate() const {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw InvalidInput("CIR mu must be finite and >= 0");
    }
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw InvalidInput("CIR sigma2 must be finite and >= 0");
    }
    if (!std::isfinite(gamma)) {
        throw InvalidInput("CIR gamma must be finite");
    }
}

double CirParams::sigma() const noexcept { return std::sqrt(sigma2); }

StationaryMoments stationary_moments(double mu, double sigma2) {
    if (!(mu >= 0.0) || !(sigma2 >= 0.0)) {
        throw InvalidInput("stationary_moments requires mu >= 0 and sigma2 >= 0");
    }
    const double m2 = mu * (mu + sigma2 / 2.0);
    return {mu, m2, m2 * (mu + sigma2)};
}

bool feller_check(double mu, double sigma2) noexcept { return 2.0 * mu >= sigma2; }

std::vector<double> euler_path_from_increments(const CirParams& p, double y0, double h,
                                               std::span<const double> increments) {
    p.validate();
    const double sigma = p.sigma();
    std::vector<double> path(increments.size() + 1);
    double y = y0;
    path[0] = std::max(y0, 0.0);
    for (std::size_t j = 0; j < increments.size(); ++j) {
        const double yp = std::max(y, 0.0);
        y += (p.mu + p.gamma * yp) * h + sigma * std::sqrt(yp) * increments[j];
        path[j + 1] = std::max(y, 0.0);
    }
    return path;
}

EulerPath simulate_path_euler(const CirParams& p, double y0, double horizon, std::size_t steps, Stream& rng) {
    if (steps == 0 || !(horizon > 0.0)) {
        throw InvalidInput("simulate_path_euler needs steps >= 1 and horizon > 0");
    }
    if (!(y0 >= 0.0)) {
        throw InvalidInput("simulate_path_euler needs y0 >= 0");
    }
    const double h = horizon / static_cast<double>(steps);
    const double sqrt_h = std::sqrt(h);
    EulerPath out;
    out.increments.resize(steps);
    for (auto& db : out.increments) {
        db = sqrt_h * rng.normal();
    }
    out.path = euler_path_from_increments(p, y0, h, out.increments);
    return out;
}

double sample_exact_transition(const CirParams& p, double y, double h, Stream& rng) {
    // (e^{gamma h} - 1) / gamma, continuous through gamma = 0.
    const double g = p.gamma == 0.0 ? h : std::expm1(p.gamma * h) / p.gamma;
    const double scale = p.sigma2 * g / 2.0;
    if (scale == 0.0) {
        // Noiseless: deterministic ODE flow.
        return y * std::exp(p.gamma * h) + p.mu * g;
    }
    const double lambda = y * std::exp(p.gamma * h) / scale;
    const double n = lambda > 0.0 ? distr::poisson(rng, lambda) : 0.0;
    return distr::gamma(rng, 2.0 * p.mu / p.sigma2 + n, scale);
}

namespace {

struct LtuDraw {
    double alpha_limit = 0.0;
    double mu_limit = 0.0;
    bool singular = false;
};

LtuDraw ltu_path(const CirParams& p, std::size_t steps, double tol, Stream& rng) {
    const double h = 1.0 / static_cast<double>(steps);
    const double sqrt_h = std::sqrt(h);
    const double sigma = p.sigma();
    double y = 0.0;
    double sum_y = 0.0;
    double sum_y2 = 0.0;
    double i1 = 0.0;
    double i2 = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
        const double yp = std::max(y, 0.0);
        const double root = std::sqrt(yp);
        const double db = sqrt_h * rng.normal();
        sum_y += yp;
        sum_y2 += yp * yp;
        i1 += yp * root * db;
        i2 += root * db;
        y += (p.mu + p.gamma * yp) * h + sigma * root * db;
    }
    const double a = sum_y2 * h;
    const double bv = sum_y * h;
    i1 *= sigma;
    i2 *= sigma;
    const double det = a - bv * bv;
    if (!(a > 0.0) || !(det > tol * a)) {
        return {0.0, 0.0, true};
    }
    return {(i1 - bv * i2) / det, (a * i2 - bv * i1) / det, false};
}

}  // namespace

LimitTable tabulate_ltu_limit(const CirParams& p, const TabulateOptions& opt) {
    p.validate();
    if (opt.paths == 0 || opt.steps == 0) {
        throw InvalidInput("tabulate_ltu_limit needs paths >= 1 and steps >= 1");
    }
    LimitTable table;
    table.labels = {"alpha_limit", "mu_limit"};
    table.samples.resize(2 * opt.paths);
    table.steps = opt.steps;
    table.params = {{"mu", p.mu}, {"gamma", p.gamma}, {"sigma2", p.sigma2}};
    std::vector<std::size_t> redraws(opt.paths, 0);

    parallel_for(opt.paths, opt.threads, [&](std::size_t i) {
        for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
            Stream rng(opt.seed, i, attempt);
            const LtuDraw d = ltu_path(p, opt.steps, opt.singular_tol, rng);
            if (!d.singular) {
                table.samples[2 * i] = d.alpha_limit;
                table.samples[2 * i + 1] = d.mu_limit;
                redraws[i] = attempt;
                return;
            }
        }
        throw SingularDesign("path " + std::to_string(i) + " stayed singular after " +
                             std::to_string(opt.max_attempts) + " attempts");
    });
    for (std::size_t r : redraws) {
        table.resample_count += r;
    }
    table.notes = {"scheme: full-truncation Euler on [0,1], Y_0 = 0",
                   "stochastic integrals: left-point sums on the path increments",
                   "singular Gram paths redrawn from a fresh substream; see resample_count"};
    return table;
}

LimitTable sample_explosive_limit(const CirParams& p, std::size_t draws, std::uint64_t seed, int threads) {
    p.validate();
    if (p.gamma != 1.0) {
        throw InvalidInput("sample_explosive_limit requires gamma = +1");
    }
    if (!(p.mu > 0.0) || !(p.sigma2 > 0.0)) {
        throw InvalidInput("sample_explosive_limit requires mu > 0 and sigma2 > 0");
    }
    if (draws == 0) {
        throw InvalidInput("sample_explosive_limit needs at least one draw");
    }
    LimitTable table;
    table.labels = {"limit", "z"};
    table.samples.resize(2 * draws);
    table.params = {{"mu", p.mu}, {"gamma", p.gamma}, {"sigma2", p.sigma2}};
    const double shape = 2.0 * p.mu / p.sigma2;
    const double scale = p.sigma2 / 2.0;
    const double factor = 2.0 / std::sqrt(3.0) * p.sigma();
    parallel_for(draws, threads, [&](std::size_t i) {
        Stream rng(seed, i);
        const double z = distr::gamma(rng, shape, scale);
        const double y = rng.normal();
        table.samples[2 * i] = factor * y / std::sqrt(z);
        table.samples[2 * i + 1] = z;
    });
    return table;
}

}  // namespace nearunit::cir
