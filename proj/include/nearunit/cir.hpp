#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nearunit/limit_table.hpp"
#include "nearunit/rng.hpp"

namespace nearunit::cir {

/// dY = (mu + gamma Y) ds + sigma sqrt(Y) dB.
///
/// mu and sigma2 may be zero to reach the degenerate limits; negative or
/// non-finite values are rejected.
struct CirParams {
    double mu = 1.0;
    double gamma = -1.0;
    double sigma2 = 1.0;

    void validate() const;
    [[nodiscard]] double sigma() const noexcept;
};

/// First three moments of the gamma invariant law at gamma = -1.
struct StationaryMoments {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
};

[[nodiscard]] StationaryMoments stationary_moments(double mu, double sigma2);

/// True iff 2 mu >= sigma2 (zero is unattainable from a positive start).
[[nodiscard]] bool feller_check(double mu, double sigma2) noexcept;

struct EulerPath {
    /// Y_0, ..., Y_steps; every value is >= 0.
    std::vector<double> path;
    /// Brownian increments dB_j, each N(0, h).
    std::vector<double> increments;
};

/// Full-truncation Euler on [0, horizon].
[[nodiscard]] EulerPath simulate_path_euler(const CirParams& p, double y0, double horizon, std::size_t steps,
                                            Stream& rng);

/// The same scheme driven by caller-supplied increments.
[[nodiscard]] std::vector<double> euler_path_from_increments(const CirParams& p, double y0, double h,
                                                             std::span<const double> increments);

/// One draw of Y_{s+h} given Y_s = y from the exact noncentral gamma law.
[[nodiscard]] double sample_exact_transition(const CirParams& p, double y, double h, Stream& rng);

struct TabulateOptions {
    std::size_t paths = 100000;
    std::size_t steps = 5000;
    std::uint64_t seed = 1;
    int threads = 0;
    /// Paths whose Gram determinant falls below this fraction of A are redrawn.
    double singular_tol = 1e-12;
    std::size_t max_attempts = 100;
};

/// Draws of the local-to-unity OLS limit
///   [[A, Bv], [Bv, 1]]^{-1} [I1, I2]
/// with A = int Y^2, Bv = int Y, I1 = sigma int Y^{3/2} dB, I2 = sigma int Y^{1/2} dB
/// on [0, 1], Y_0 = 0. Columns: alpha_limit, mu_limit.
[[nodiscard]] LimitTable tabulate_ltu_limit(const CirParams& p, const TabulateOptions& opt);

/// Draws of (2/sqrt 3) sigma Z^{-1/2} Y, Z ~ Gamma(2mu/sigma2, scale sigma2/2),
/// Y ~ N(0, 1). Columns: limit, z. Requires gamma = +1.
[[nodiscard]] LimitTable sample_explosive_limit(const CirParams& p, std::size_t draws, std::uint64_t seed,
                                                int threads = 0);

}  // namespace nearunit::cir
