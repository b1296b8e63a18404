#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nearunit/linalg.hpp"

namespace nearunit {

enum class Method { OLS, WLS, PoissonQML };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] Method parse_method(std::string_view name);

/// Fit of X_t = alpha X_{t-1} + mu + W_t over t = 1..n.
struct EstimateResult {
    double alpha_hat = 0.0;
    double mu_hat = 0.0;
    /// sum W^2 / sum X_{t-1}; NaN when the denominator is not positive.
    double sigma2_hat = 0.0;
    std::vector<double> residuals;
    /// 1 / (1 - alpha_hat), present iff alpha_hat < 1.
    std::optional<double> k_hat;
    /// ln k_hat / ln n.
    std::optional<double> tau_hat;
    Method method = Method::OLS;
    /// Number of transitions (series length minus one).
    std::size_t n = 0;
    /// sigma2_hat >= 2 mu_hat: the Feller-type condition fails at the estimates.
    bool feller_warning = false;
    /// Poisson-QML only.
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
};

/// Closed-form (weighted) least-squares solution; shared by OLS, WLS and the
/// bootstrap so that unit weights give bit-identical results.
struct LsFit {
    double alpha = 0.0;
    double mu = 0.0;
};

/// Solves min sum w_t (X_t - a X_{t-1} - m)^2. An empty `weights` means all
/// ones. Sums are taken about the unweighted mean of the lagged series.
/// Throws DegenerateDesign when the weighted Gram determinant is below 1e-12
/// relative to its diagonal product.
[[nodiscard]] LsFit weighted_ls(std::span<const double> series, std::span<const double> weights = {});

[[nodiscard]] EstimateResult ols(std::span<const double> series);
[[nodiscard]] EstimateResult wls(std::span<const double> series);

struct QmlOptions {
    double tol = 1e-8;
    std::size_t max_iter = 100;
    double mu_floor = 1e-8;
};

/// Maximizes the Poisson quasi-likelihood over alpha >= 0, mu > 0 by damped
/// Newton from the OLS start. Converged when the per-observation score has
/// sup-norm below `tol`, or when a full Newton step no longer changes the
/// iterate in floating point.
[[nodiscard]] EstimateResult poisson_qmle(std::span<const double> series, const QmlOptions& opt = {});

[[nodiscard]] EstimateResult estimate(std::span<const double> series, Method method);

/// sum W_t^2 / sum X_{t-1}; throws ZeroDenominator when sum X_{t-1} == 0.
[[nodiscard]] double sigma2_hat(std::span<const double> series, double alpha_hat, double mu_hat);

struct VarianceExponent {
    double a_hat = 0.0;
    /// 95% half-width, Student-t with m - 2 degrees of freedom.
    double ci_halfwidth = 0.0;
    double r2 = 0.0;
    /// Points used, and points dropped because X_{t-1} == 0 or W_t == 0.
    std::size_t used = 0;
    std::size_t dropped = 0;
};

/// Slope of log W_t^2 on log X_{t-1} using OLS residuals.
[[nodiscard]] VarianceExponent variance_exponent(std::span<const double> series);

/// Estimation error (alpha_hat - alpha, mu_hat - mu) of OLS written in terms
/// of the true innovations: G^{-1} sum z_{t-1} W_t with z = (X_{t-1}, 1).
/// Used where the error is far below the resolution of the levels.
struct OlsError {
    long double d_alpha = 0.0L;
    long double d_mu = 0.0L;
};

[[nodiscard]] OlsError ols_error(std::span<const double> lagged, std::span<const double> innovations);

}  // namespace nearunit
