#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nearunit/affine_models.hpp"
#include "nearunit/inference.hpp"
#include "nearunit/report.hpp"

namespace nearunit::mc {

/// Shared description of a replicated experiment.
struct ExperimentConfig {
    AffineSpec spec = AffineSpec::inarch(1.0);
    RegimeSpec regime = RegimeSpec::mildly_integrated(-1.0, 0.4);
    std::size_t n = 3000;
    /// Replications.
    std::size_t M = 5000;
    /// Bootstrap draws, where a study uses them.
    std::size_t B = 5000;
    std::uint64_t seed = 1;
    int threads = 0;
    double x0 = 0.0;
};

/// Stable study identifiers; each study draws from its own key subtree.
enum class StudyId : std::uint64_t {
    LtuDistribution = 1,
    MildDistribution = 2,
    Coverage = 3,
    Power = 4,
    Bubble = 5,
    Ar1Limit = 6,
    ExplosiveRate = 7,
    BootstrapValidity = 8,
};

[[nodiscard]] std::uint64_t study_key(std::uint64_t seed, StudyId id) noexcept;

/// Simulates replication `rep` of a study into `out`.
void simulate_replication(const ExperimentConfig& cfg, double alpha_n, std::uint64_t key, std::size_t rep,
                          std::size_t attempt, std::vector<double>& out);

struct LtuStudyOptions {
    std::size_t bins = 60;
    /// CIR comparator paths; 0 skips the comparator.
    std::size_t comparator_paths = 0;
    std::size_t comparator_steps = 5000;
    /// Bootstrap draws n(alpha^b - alpha_hat) on replication 0; 0 skips.
    std::size_t bootstrap_B = 0;
};

/// OLS under alpha_n = 1 + gamma/n. Columns alpha_stat = n(alpha_hat - alpha_n),
/// mu_stat = mu_hat - mu_n.
[[nodiscard]] StudyReport dist_study_ltu(const ExperimentConfig& cfg, const LtuStudyOptions& opt = {});

struct MildStudyOptions {
    bool plugin = true;
    /// Bootstrap on replication 0 with cfg.B draws.
    bool bootstrap = true;
    bool wls = false;
    bool poisson_qml = false;
    /// Studentized (alpha_hat - alpha_n) / se_sandwich column.
    bool sandwich = false;
    std::size_t bins = 60;
};

/// Mildly stationary distribution study: benchmark sqrt(n k)(alpha_hat - alpha),
/// sqrt(n/k)(mu_hat - mu), plug-in rescalings (alpha_hat >= 1 skipped) and,
/// optionally, WLS / Poisson-QML / sandwich columns.
[[nodiscard]] StudyReport dist_study_mild(const ExperimentConfig& cfg, const MildStudyOptions& opt = {});

struct CoverageOptions {
    double level = 0.9;
    /// Use the family sigma^2 limit in the plug-in covariance instead of sigma2_hat.
    bool plugin_fixed_sigma2 = true;
    bool bootstrap = true;
};

/// Containment of (alpha_n, mu_n) by plug-in and bootstrap-normal intervals.
[[nodiscard]] StudyReport coverage_study(const ExperimentConfig& cfg, const CoverageOptions& opt = {});

struct PowerOptions {
    std::vector<double> alpha0 = {0.95, 0.99};
    /// DGP values of alpha; H0 cells at each alpha0 are added automatically.
    std::vector<double> alpha_grid;
    double level = 0.10;
    bool plugin = true;
    bool bootstrap = true;
};

/// 0.800, 0.804, ..., 1.000.
[[nodiscard]] std::vector<double> default_power_grid();

/// Raw and size-corrected rejection rates of the two-sided test of
/// alpha = alpha0. cfg.M is the number of trajectories per cell.
[[nodiscard]] StudyReport power_study(const ExperimentConfig& cfg, const PowerOptions& opt);

struct BubbleOptions {
    std::size_t block_count = 10;
    double threshold_multiple = 3.0;
};

/// Block-maximum exceedances of threshold_multiple x marginal mean, local
/// OLS slopes in exceeding blocks, and the linear AR(1) comparator.
[[nodiscard]] StudyReport bubble_study(const ExperimentConfig& cfg, const BubbleOptions& opt = {});

struct Ar1LimitOptions {
    /// Sample sizes for the stationary AR(1) sup-deviation.
    std::vector<std::size_t> ns = {100, 1000, 10000};
    double tau = 0.5;
    /// s ranges over observation times in [0, s_max].
    double s_max = 5.0;
    double sigma_eps = 1.0;
    /// Mildly explosive affine part.
    std::size_t explosive_n = 10000;
    double explosive_tau = 0.7;
};

/// Uses cfg.spec.mu as the AR(1) intercept and cfg.spec as the explosive
/// affine model (INARCH by default).
[[nodiscard]] StudyReport ar1_limit_check(const ExperimentConfig& cfg, const Ar1LimitOptions& opt = {});

/// Lagged levels and exact innovations of an INARCH path; innovations are
/// formed before rounding so they keep full precision when levels are huge.
void simulate_innovations(double mu, double alpha_n, std::size_t n, double x0, Stream& rng,
                          std::vector<double>& lagged, std::vector<double>& innovations);

/// Mildly explosive INARCH: k alpha^{n/2}(alpha_hat - alpha) and mu_hat - mu,
/// compared with sample_explosive_limit.
[[nodiscard]] StudyReport explosive_study(const ExperimentConfig& cfg, std::size_t reference_draws = 100000);

/// Per-trajectory rescaled bootstrap covariance over cfg.M trajectories and
/// its entrywise median.
[[nodiscard]] StudyReport bootstrap_validity_study(const ExperimentConfig& cfg);

}  // namespace nearunit::mc
