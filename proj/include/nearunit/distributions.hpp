#pragma once

#include "nearunit/rng.hpp"

namespace nearunit::distr {

/// log(k!) for nonnegative integral k stored as double.
[[nodiscard]] double log_factorial(double k) noexcept;

/// log P(N = k) for N ~ Poisson(mean); evaluated in a cancellation-free form
/// so that it stays accurate for means far beyond 1e9.
[[nodiscard]] double poisson_log_pmf(double k, double mean) noexcept;

/// Poisson draw returned as a double (exact integer up to 2^53).
///
/// mean < 10 uses sequential multiplication; 10 <= mean <= 1e15 uses
/// Hoermann's transformed rejection with squeeze (PTRS); beyond 1e15 the
/// integer lattice is no longer representable and a rounded normal draw with
/// matching mean and variance is returned.
[[nodiscard]] double poisson(Stream& rng, double mean) noexcept;

/// Gamma(shape, scale) draw, Marsaglia-Tsang; shape < 1 via the
/// U^{1/shape} boost. shape == 0 returns exactly 0.
[[nodiscard]] double gamma(Stream& rng, double shape, double scale) noexcept;

/// Largest mean handled by the exact integer Poisson sampler.
inline constexpr double kPoissonExactLimit = 1e15;

}  // namespace nearunit::distr
