#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nearunit/estimation.hpp"
#include "nearunit/linalg.hpp"
#include "nearunit/rng.hpp"

namespace nearunit {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

/// Omega^{-1} Sigma Omega^{-1} with Omega = [[m2, m1], [m1, 1]] and
/// Sigma = sigma2 [[m3, m2], [m2, m1]], m_j the stationary gamma moments.
/// Throws SingularOmega when m2 - m1^2 is not positive.
[[nodiscard]] Mat2 plugin_covariance(double mu_hat, double sigma2_hat);

struct PluginInference {
    Mat2 cov;
    double se_alpha = 0.0;
    double se_mu = 0.0;
    Interval ci_alpha;
    Interval ci_mu;
    /// sqrt(n / (1 - alpha_hat)) and sqrt(n (1 - alpha_hat)).
    double scale_alpha = 0.0;
    double scale_mu = 0.0;
    /// The alpha interval was truncated at 1.
    bool capped = false;
    double level = 0.9;
    double sigma2_used = 0.0;
};

struct PluginOptions {
    /// Replaces sigma2_hat in the covariance (e.g. a known family value).
    std::optional<double> sigma2;
    bool cap = true;
};

/// Throws AlphaAtOrAboveOne when alpha_hat >= 1.
[[nodiscard]] PluginInference plugin_ci(const EstimateResult& est, double level, const PluginOptions& opt = {});

struct SandwichResult {
    double se_alpha = 0.0;
    double se_mu = 0.0;
    Mat2 m_hat;
    Mat2 s_hat;
    /// n^{-1} M^{-1} S M^{-1}.
    Mat2 var;
};

[[nodiscard]] SandwichResult sandwich_se(std::span<const double> series, const EstimateResult& est);

enum class WeightDist { Exp1, Degenerate1, LogNormal11 };

[[nodiscard]] std::string_view to_string(WeightDist w) noexcept;
[[nodiscard]] WeightDist parse_weight_dist(std::string_view name);

/// Fills `w` with i.i.d. positive weights of mean 1 and variance 1 (or all ones).
void fill_weights(WeightDist dist, Stream& rng, std::span<double> w);

struct BootstrapOptions {
    std::size_t B = 5000;
    WeightDist weights = WeightDist::Exp1;
    std::uint64_t seed = 1;
    int threads = 0;
    std::size_t max_attempts = 100;
};

struct BootstrapDraws {
    std::vector<double> alpha;
    std::vector<double> mu;
    WeightDist weights = WeightDist::Exp1;
    std::size_t B = 0;
    /// OLS estimate of the original series.
    LsFit base;
    /// Draws redrawn after a degenerate weighted design.
    std::size_t resample_count = 0;
};

/// Random-weighted least squares; draw b uses stream (seed, b).
[[nodiscard]] BootstrapDraws bootstrap(std::span<const double> series, const BootstrapOptions& opt);

/// Same, reusing a caller buffer and running serially; for nested loops.
void bootstrap_into(std::span<const double> series, const BootstrapOptions& opt, BootstrapDraws& out,
                    std::vector<double>& weight_buffer);

struct BootstrapCi {
    /// base +- z sd, alpha upper end capped at 1.
    Interval ci_alpha;
    Interval ci_mu;
    /// Raw percentile intervals.
    Interval pct_alpha;
    Interval pct_mu;
    double se_alpha = 0.0;
    double se_mu = 0.0;
    bool capped = false;
    double level = 0.9;
};

/// Requires B >= 100.
[[nodiscard]] BootstrapCi bootstrap_ci(const BootstrapDraws& draws, double level);

/// Bootstrap standard deviations without the B >= 100 requirement.
[[nodiscard]] double bootstrap_sd(std::span<const double> draws);

enum class TestMethod { PluginSE, BootstrapSE, SandwichSE };

[[nodiscard]] std::string_view to_string(TestMethod m) noexcept;
[[nodiscard]] TestMethod parse_test_method(std::string_view name);

struct TestResult {
    double alpha0 = 0.0;
    double alpha_hat = 0.0;
    double se = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    TestMethod method = TestMethod::PluginSE;
    /// level -> reject (p < level).
    std::map<double, bool> decision_at;
};

struct TestOptions {
    TestMethod method = TestMethod::PluginSE;
    std::vector<double> levels = {0.01, 0.05, 0.10};
    BootstrapOptions bootstrap;
};

/// Standard error of alpha_hat under the chosen method.
[[nodiscard]] double alpha_standard_error(std::span<const double> series, const EstimateResult& est,
                                          const TestOptions& opt);

/// t = (alpha_hat - alpha0) / se and its two-sided normal p-value.
[[nodiscard]] TestResult make_test(double alpha_hat, double se, double alpha0, TestMethod method,
                                   std::span<const double> levels);

/// Requires alpha0 < 1.
[[nodiscard]] TestResult test_alpha(std::span<const double> series, double alpha0, const TestOptions& opt);

/// 0.700, 0.701, ..., 0.999.
[[nodiscard]] std::vector<double> default_alpha_grid();

struct PvalueCurve {
    std::vector<double> alpha0;
    std::vector<double> p;
    TestMethod method = TestMethod::PluginSE;
    double se = 0.0;
    double alpha_hat = 0.0;
    /// Maximal runs of grid points with p >= level.
    std::vector<Interval> region;
    /// The last grid point is not rejected, so the region extends to 1.
    bool open_at_unity = false;
    double level = 0.10;
};

/// Grid points must be < 1.
[[nodiscard]] PvalueCurve pvalue_curve(std::span<const double> series, std::span<const double> grid,
                                       const TestOptions& opt, double level = 0.10);

}  // namespace nearunit
