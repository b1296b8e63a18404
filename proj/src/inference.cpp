#include "nearunit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nearunit/error.hpp"
#include "nearunit/parallel.hpp"
#include "nearunit/rng.hpp"
#include "nearunit/stats.hpp"

namespace nearunit {

namespace {

/// center +- z se; level 1 (z infinite) gives the whole line.
Interval symmetric(double center, double z, double se) {
    if (std::isinf(z)) {
        return {-INFINITY, INFINITY};
    }
    return {center - z * se, center + z * se};
}

}  // namespace

Mat2 plugin_covariance(double mu_hat, double sigma2_hat) {
    if (!std::isfinite(mu_hat) || !std::isfinite(sigma2_hat)) {
        throw SingularOmega("plug-in covariance needs finite mu and sigma2");
    }
    const double m1 = mu_hat;
    const double m2 = mu_hat * (mu_hat + sigma2_hat / 2.0);
    const double m3 = m2 * (mu_hat + sigma2_hat);
    const Mat2 omega{m2, m1, m1, 1.0};
    if (!(omega.det() > 0.0) || !(m1 > 0.0)) {
        throw SingularOmega("Omega is singular or indefinite (mu = " + std::to_string(mu_hat) +
                            ", sigma2 = " + std::to_string(sigma2_hat) + ")");
    }
    const Mat2 sigma = Mat2{m3, m2, m2, m1} * sigma2_hat;
    return sandwich(omega, sigma);
}

PluginInference plugin_ci(const EstimateResult& est, double level, const PluginOptions& opt) {
    if (!(level > 0.0 && level <= 1.0)) {
        throw InvalidInput("confidence level must lie in (0, 1]");
    }
    if (!(est.alpha_hat < 1.0)) {
        throw AlphaAtOrAboveOne("plug-in inference needs alpha_hat < 1, got " + std::to_string(est.alpha_hat) +
                                "; use the bootstrap instead");
    }
    PluginInference out;
    out.level = level;
    out.sigma2_used = opt.sigma2.value_or(est.sigma2_hat);
    out.cov = plugin_covariance(est.mu_hat, out.sigma2_used);
    const auto n = static_cast<double>(est.n);
    const double gap = 1.0 - est.alpha_hat;
    out.scale_alpha = std::sqrt(n / gap);
    out.scale_mu = std::sqrt(n * gap);
    out.se_alpha = std::sqrt(out.cov.xx * gap / n);
    out.se_mu = std::sqrt(out.cov.yy / (n * gap));
    const double z = stats::two_sided_z(level);
    out.ci_alpha = symmetric(est.alpha_hat, z, out.se_alpha);
    out.ci_mu = symmetric(est.mu_hat, z, out.se_mu);
    if (opt.cap && out.ci_alpha.hi > 1.0) {
        out.ci_alpha.hi = 1.0;
        out.capped = true;
    }
    return out;
}

SandwichResult sandwich_se(std::span<const double> series, const EstimateResult& est) {
    if (series.size() < 4) {
        throw InvalidInput("sandwich_se needs at least 3 transitions");
    }
    const std::size_t n = series.size() - 1;
    Mat2 m;
    Mat2 s;
    for (std::size_t t = 1; t <= n; ++t) {
        const double x = series[t - 1];
        const double w = series[t] - est.alpha_hat * x - est.mu_hat;
        const double w2 = w * w;
        m.xx += x * x;
        m.xy += x;
        s.xx += w2 * x * x;
        s.xy += w2 * x;
        s.yy += w2;
    }
    const auto nd = static_cast<double>(n);
    m.yx = m.xy;
    m.yy = nd;
    s.yx = s.xy;
    m = m * (1.0 / nd);
    s = s * (1.0 / nd);
    if (!(m.det() > 1e-12 * m.xx * m.yy)) {
        throw DegenerateDesign("sandwich_se: singular design");
    }
    SandwichResult out;
    out.m_hat = m;
    out.s_hat = s;
    out.var = sandwich(m, s) * (1.0 / nd);
    out.se_alpha = std::sqrt(std::max(out.var.xx, 0.0));
    out.se_mu = std::sqrt(std::max(out.var.yy, 0.0));
    return out;
}

std::string_view to_string(WeightDist w) noexcept {
    switch (w) {
        case WeightDist::Exp1: return "exp1";
        case WeightDist::Degenerate1: return "degenerate1";
        case WeightDist::LogNormal11: return "lognormal11";
    }
    return "unknown";
}

WeightDist parse_weight_dist(std::string_view name) {
    if (name == "exp1" || name == "exp") return WeightDist::Exp1;
    if (name == "degenerate1" || name == "ones") return WeightDist::Degenerate1;
    if (name == "lognormal11" || name == "lognormal") return WeightDist::LogNormal11;
    throw InvalidInput("unknown weight distribution '" + std::string(name) + "'");
}

namespace {

// Log-normal with mean 1 and variance 1: s^2 = ln 2.
const double kLogNormalS = std::sqrt(std::log(2.0));

}  // namespace

void fill_weights(WeightDist dist, Stream& rng, std::span<double> w) {
    switch (dist) {
        case WeightDist::Exp1:
            for (auto& v : w) v = rng.exponential();
            break;
        case WeightDist::Degenerate1:
            std::fill(w.begin(), w.end(), 1.0);
            break;
        case WeightDist::LogNormal11:
            for (auto& v : w) v = std::exp(kLogNormalS * rng.normal() - 0.5 * kLogNormalS * kLogNormalS);
            break;
    }
}

namespace {

std::size_t one_draw(std::span<const double> series, const BootstrapOptions& opt, std::size_t b,
                     std::vector<double>& w, double& alpha, double& mu) {
    for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
        Stream rng(opt.seed, b, attempt);
        fill_weights(opt.weights, rng, w);
        try {
            const LsFit fit = weighted_ls(series, w);
            alpha = fit.alpha;
            mu = fit.mu;
            return attempt;
        } catch (const DegenerateDesign&) {
        }
    }
    throw DegenerateDesign("bootstrap draw " + std::to_string(b) + " stayed degenerate after " +
                           std::to_string(opt.max_attempts) + " attempts");
}

void init_draws(std::span<const double> series, const BootstrapOptions& opt, BootstrapDraws& out) {
    if (series.size() < 4) {
        throw InvalidInput("bootstrap needs at least 3 transitions");
    }
    if (opt.B == 0) {
        throw InvalidInput("bootstrap needs B >= 1");
    }
    out.base = weighted_ls(series);
    out.weights = opt.weights;
    out.B = opt.B;
    out.alpha.resize(opt.B);
    out.mu.resize(opt.B);
    out.resample_count = 0;
}

}  // namespace

BootstrapDraws bootstrap(std::span<const double> series, const BootstrapOptions& opt) {
    BootstrapDraws out;
    init_draws(series, opt, out);
    std::vector<std::size_t> redraws(opt.B, 0);
    const std::size_t n = series.size() - 1;
    parallel_for(opt.B, opt.threads, [&](std::size_t b) {
        thread_local std::vector<double> w;
        w.resize(n);
        redraws[b] = one_draw(series, opt, b, w, out.alpha[b], out.mu[b]);
    });
    for (std::size_t r : redraws) {
        out.resample_count += r;
    }
    return out;
}

void bootstrap_into(std::span<const double> series, const BootstrapOptions& opt, BootstrapDraws& out,
                    std::vector<double>& weight_buffer) {
    init_draws(series, opt, out);
    weight_buffer.resize(series.size() - 1);
    for (std::size_t b = 0; b < opt.B; ++b) {
        out.resample_count += one_draw(series, opt, b, weight_buffer, out.alpha[b], out.mu[b]);
    }
}

double bootstrap_sd(std::span<const double> draws) {
    if (draws.size() < 2) {
        return 0.0;
    }
    return std::sqrt(stats::variance(draws));
}

BootstrapCi bootstrap_ci(const BootstrapDraws& draws, double level) {
    if (draws.B < 100) {
        throw InvalidInput("bootstrap_ci needs B >= 100, got " + std::to_string(draws.B));
    }
    if (!(level > 0.0 && level <= 1.0)) {
        throw InvalidInput("confidence level must lie in (0, 1]");
    }
    BootstrapCi out;
    out.level = level;
    out.se_alpha = bootstrap_sd(draws.alpha);
    out.se_mu = bootstrap_sd(draws.mu);
    const double z = stats::two_sided_z(level);
    const double a = draws.base.alpha;
    const double m = draws.base.mu;
    out.ci_alpha = symmetric(a, z, out.se_alpha);
    out.ci_mu = symmetric(m, z, out.se_mu);
    if (out.ci_alpha.hi > 1.0) {
        out.ci_alpha.hi = 1.0;
        out.capped = true;
    }
    const double lo = (1.0 - level) / 2.0;
    const double hi = 1.0 - lo;
    std::vector<double> sa(draws.alpha);
    std::vector<double> sm(draws.mu);
    std::sort(sa.begin(), sa.end());
    std::sort(sm.begin(), sm.end());
    out.pct_alpha = {stats::quantile_sorted(sa, lo), stats::quantile_sorted(sa, hi)};
    out.pct_mu = {stats::quantile_sorted(sm, lo), stats::quantile_sorted(sm, hi)};
    return out;
}

std::string_view to_string(TestMethod m) noexcept {
    switch (m) {
        case TestMethod::PluginSE: return "plugin";
        case TestMethod::BootstrapSE: return "bootstrap";
        case TestMethod::SandwichSE: return "sandwich";
    }
    return "unknown";
}

TestMethod parse_test_method(std::string_view name) {
    if (name == "plugin") return TestMethod::PluginSE;
    if (name == "bootstrap") return TestMethod::BootstrapSE;
    if (name == "sandwich") return TestMethod::SandwichSE;
    throw InvalidInput("unknown test method '" + std::string(name) + "'");
}

double alpha_standard_error(std::span<const double> series, const EstimateResult& est, const TestOptions& opt) {
    switch (opt.method) {
        case TestMethod::PluginSE: return plugin_ci(est, 0.9).se_alpha;
        case TestMethod::SandwichSE: return sandwich_se(series, est).se_alpha;
        case TestMethod::BootstrapSE: return bootstrap_sd(bootstrap(series, opt.bootstrap).alpha);
    }
    throw InvalidInput("unknown test method");
}

TestResult make_test(double alpha_hat, double se, double alpha0, TestMethod method,
                     std::span<const double> levels) {
    TestResult r;
    r.alpha0 = alpha0;
    r.alpha_hat = alpha_hat;
    r.se = se;
    r.method = method;
    const double diff = alpha_hat - alpha0;
    if (diff == 0.0) {
        r.t_stat = 0.0;
    } else if (se > 0.0) {
        r.t_stat = diff / se;
    } else {
        r.t_stat = diff > 0.0 ? INFINITY : -INFINITY;
    }
    r.p_value = stats::two_sided_pvalue(r.t_stat);
    for (double level : levels) {
        r.decision_at[level] = r.p_value < level;
    }
    return r;
}

TestResult test_alpha(std::span<const double> series, double alpha0, const TestOptions& opt) {
    if (!(alpha0 < 1.0)) {
        throw InvalidInput("alpha0 must be < 1 under mild stationarity");
    }
    const EstimateResult est = ols(series);
    const double se = alpha_standard_error(series, est, opt);
    return make_test(est.alpha_hat, se, alpha0, opt.method, opt.levels);
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int i = 700; i <= 999; ++i) {
        grid.push_back(i / 1000.0);
    }
    return grid;
}

PvalueCurve pvalue_curve(std::span<const double> series, std::span<const double> grid, const TestOptions& opt,
                         double level) {
    if (grid.empty()) {
        throw InvalidInput("p-value grid is empty");
    }
    for (double a : grid) {
        if (!(a < 1.0)) {
            throw InvalidInput("p-value grid points must be < 1");
        }
    }
    const EstimateResult est = ols(series);
    PvalueCurve c;
    c.method = opt.method;
    c.level = level;
    c.alpha_hat = est.alpha_hat;
    c.se = alpha_standard_error(series, est, opt);
    c.alpha0.assign(grid.begin(), grid.end());
    c.p.resize(grid.size());
    bool open = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        c.p[i] = make_test(est.alpha_hat, c.se, grid[i], opt.method, {}).p_value;
        const bool keep = c.p[i] >= level;
        if (keep && !open) {
            c.region.push_back({grid[i], grid[i]});
        } else if (keep) {
            c.region.back().hi = grid[i];
        }
        open = keep;
    }
    c.open_at_unity = open;
    return c;
}

}  // namespace nearunit
