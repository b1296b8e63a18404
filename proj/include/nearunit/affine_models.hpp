#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nearunit/rng.hpp"

namespace nearunit {

enum class Family { INARCH, NBAR, ARG, ARG0, LinearAR1 };

[[nodiscard]] std::string_view to_string(Family f) noexcept;
[[nodiscard]] Family parse_family(std::string_view name);

/// A member of the affine family. Only the fields relevant to `family` are
/// read; the named constructors fill them.
///
///   INARCH     Poisson(alpha x + mu)
///   NBAR       negative binomial via Poisson(alpha * Gamma(kappa + x, 1))
///   ARG        Gamma(kappa + Poisson(alpha x / c), scale c)
///   ARG0       Gamma(Poisson(alpha x / theta + b), scale theta), 0 when the count is 0
///   LinearAR1  alpha x + mu + N(0, sigma_eps^2)
struct AffineSpec {
    Family family = Family::INARCH;
    double mu = 1.0;
    double kappa = 0.0;
    double c = 0.0;
    double theta = 0.0;
    double b = 0.0;
    double sigma_eps = 0.0;

    [[nodiscard]] static AffineSpec inarch(double mu);
    [[nodiscard]] static AffineSpec nbar(double kappa);
    [[nodiscard]] static AffineSpec arg(double c, double kappa);
    [[nodiscard]] static AffineSpec arg0(double theta, double b);
    [[nodiscard]] static AffineSpec linear_ar1(double mu, double sigma_eps);

    /// Throws InvalidInput on out-of-domain parameters.
    void validate() const;

    /// True for the integer-valued families (INARCH, NBAR).
    [[nodiscard]] bool is_count() const noexcept;

    /// True when states are constrained to be nonnegative (all but LinearAR1).
    [[nodiscard]] bool is_nonnegative() const noexcept;
};

/// Conditional mean alpha*x + mu and variance beta*x + delta at a given alpha_n.
struct AffineCoefficients {
    double alpha = 0.0;
    double mu = 0.0;
    double beta = 0.0;
    double delta = 0.0;
};

[[nodiscard]] AffineCoefficients coefficients(const AffineSpec& spec, double alpha_n);

/// Limit of beta_n as alpha_n -> 1 (the CIR volatility parameter sigma^2).
[[nodiscard]] double sigma2_limit(const AffineSpec& spec);

/// Intercept mu_n at the unit root (the CIR drift intercept).
[[nodiscard]] double mu_limit(const AffineSpec& spec);

struct ConditionalMoments {
    double mean = 0.0;
    double variance = 0.0;
};

[[nodiscard]] ConditionalMoments conditional_moments(const AffineSpec& spec, double alpha_n, double x);

/// One exact draw of X_t given X_{t-1} = x.
[[nodiscard]] double step(const AffineSpec& spec, double alpha_n, double x, Stream& rng);

/// mu_n / (1 - alpha_n); throws NotStationary when alpha_n >= 1.
[[nodiscard]] double marginal_mean(const AffineSpec& spec, double alpha_n);

enum class RegimeKind { LocalToUnity, MildlyIntegrated };

/// alpha_n = 1 + gamma/n (local-to-unity) or 1 + gamma/k_n with k_n = n^tau
/// (mildly integrated, gamma normalized to +-1). An explicit k_n overrides n^tau.
struct RegimeSpec {
    RegimeKind kind = RegimeKind::LocalToUnity;
    double gamma = -1.0;
    double tau = 0.5;
    std::optional<double> kn;

    [[nodiscard]] static RegimeSpec local_to_unity(double gamma);
    /// `gamma_sign` is reduced to its sign.
    [[nodiscard]] static RegimeSpec mildly_integrated(double gamma_sign, double tau);
    [[nodiscard]] static RegimeSpec mildly_integrated_kn(double gamma_sign, double kn);
};

struct ResolvedAlpha {
    double alpha = 1.0;
    std::optional<double> kn;
};

/// Throws RegimeInfeasible when a mildly integrated k_n is < 2 or >= n.
[[nodiscard]] ResolvedAlpha resolve_alpha(const RegimeSpec& regime, std::size_t n);

struct Provenance {
    AffineSpec spec;
    std::optional<RegimeSpec> regime;
    double alpha_n = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// X_0, ..., X_n; `values.size() == n + 1`.
struct Trajectory {
    std::vector<double> values;
    std::optional<Provenance> provenance;

    [[nodiscard]] std::size_t n() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    [[nodiscard]] double x0() const noexcept { return values.empty() ? 0.0 : values.front(); }
};

/// Iterates `step` n times from x0 into `out` (resized to n + 1).
void simulate_into(const AffineSpec& spec, double alpha_n, std::size_t n, double x0, Stream& rng,
                   std::vector<double>& out);

/// Simulates under a fixed alpha_n using stream (seed, stream).
[[nodiscard]] Trajectory simulate_alpha(const AffineSpec& spec, double alpha_n, std::size_t n, double x0,
                                        std::uint64_t seed, std::uint64_t stream);

/// Simulates under a regime; n == 0 returns [x0] without resolving alpha.
[[nodiscard]] Trajectory simulate(const AffineSpec& spec, const RegimeSpec& regime, std::size_t n,
                                  double x0, std::uint64_t seed, std::uint64_t stream);

}  // namespace nearunit
