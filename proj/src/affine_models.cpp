#include "nearunit/affine_models.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "nearunit/distributions.hpp"
#include "nearunit/error.hpp"

namespace nearunit {

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::INARCH: return "INARCH";
        case Family::NBAR: return "NBAR";
        case Family::ARG: return "ARG";
        case Family::ARG0: return "ARG0";
        case Family::LinearAR1: return "LinearAR1";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    std::string lower(name);
    for (auto& ch : lower) {
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    if (lower == "inarch") return Family::INARCH;
    if (lower == "nbar") return Family::NBAR;
    if (lower == "arg") return Family::ARG;
    if (lower == "arg0") return Family::ARG0;
    if (lower == "linearar1" || lower == "ar1") return Family::LinearAR1;
    throw InvalidInput("unknown family '" + std::string(name) + "'");
}

AffineSpec AffineSpec::inarch(double mu) {
    AffineSpec s;
    s.family = Family::INARCH;
    s.mu = mu;
    s.validate();
    return s;
}

AffineSpec AffineSpec::nbar(double kappa) {
    AffineSpec s;
    s.family = Family::NBAR;
    s.kappa = kappa;
    s.validate();
    return s;
}

AffineSpec AffineSpec::arg(double c, double kappa) {
    AffineSpec s;
    s.family = Family::ARG;
    s.c = c;
    s.kappa = kappa;
    s.validate();
    return s;
}

AffineSpec AffineSpec::arg0(double theta, double b) {
    AffineSpec s;
    s.family = Family::ARG0;
    s.theta = theta;
    s.b = b;
    s.validate();
    return s;
}

AffineSpec AffineSpec::linear_ar1(double mu, double sigma_eps) {
    AffineSpec s;
    s.family = Family::LinearAR1;
    s.mu = mu;
    s.sigma_eps = sigma_eps;
    s.validate();
    return s;
}

void AffineSpec::validate() const {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidInput(std::string(what) + " must be a positive finite number");
        }
    };
    switch (family) {
        case Family::INARCH: positive(mu, "INARCH mu"); break;
        case Family::NBAR: positive(kappa, "NBAR kappa"); break;
        case Family::ARG:
            positive(c, "ARG c");
            positive(kappa, "ARG kappa");
            break;
        case Family::ARG0:
            positive(theta, "ARG0 theta");
            if (!(b >= 0.0) || !std::isfinite(b)) {
                throw InvalidInput("ARG0 b must be nonnegative");
            }
            break;
        case Family::LinearAR1:
            positive(mu, "LinearAR1 mu");
            // sigma_eps == 0 gives the deterministic recursion used in limit checks.
            if (!(sigma_eps >= 0.0) || !std::isfinite(sigma_eps)) {
                throw InvalidInput("LinearAR1 sigma_eps must be nonnegative");
            }
            break;
    }
}

bool AffineSpec::is_count() const noexcept {
    return family == Family::INARCH || family == Family::NBAR;
}

bool AffineSpec::is_nonnegative() const noexcept { return family != Family::LinearAR1; }

AffineCoefficients coefficients(const AffineSpec& spec, double alpha_n) {
    switch (spec.family) {
        case Family::INARCH:
            return {alpha_n, spec.mu, alpha_n, spec.mu};
        case Family::NBAR: {
            const double v = alpha_n * (1.0 + alpha_n);
            return {alpha_n, alpha_n * spec.kappa, v, v * spec.kappa};
        }
        case Family::ARG:
            return {alpha_n, spec.c * spec.kappa, 2.0 * alpha_n * spec.c, spec.c * spec.c * spec.kappa};
        case Family::ARG0:
            return {alpha_n, spec.theta * spec.b, 2.0 * alpha_n * spec.theta,
                    2.0 * spec.theta * spec.theta * spec.b};
        case Family::LinearAR1:
            return {alpha_n, spec.mu, 0.0, spec.sigma_eps * spec.sigma_eps};
    }
    throw InvalidInput("unknown family");
}

double sigma2_limit(const AffineSpec& spec) { return coefficients(spec, 1.0).beta; }

double mu_limit(const AffineSpec& spec) { return coefficients(spec, 1.0).mu; }

ConditionalMoments conditional_moments(const AffineSpec& spec, double alpha_n, double x) {
    if (spec.is_nonnegative() && x < 0.0) {
        throw InvalidInput("conditional_moments: state must be nonnegative");
    }
    const AffineCoefficients k = coefficients(spec, alpha_n);
    return {k.alpha * x + k.mu, k.beta * x + k.delta};
}

double step(const AffineSpec& spec, double alpha_n, double x, Stream& rng) {
    switch (spec.family) {
        case Family::INARCH:
            return distr::poisson(rng, alpha_n * x + spec.mu);
        case Family::NBAR:
            // Poisson(theta_n X) with X ~ Gamma(kappa + z, c) and theta_n = alpha_n / c;
            // c cancels, so the chain is drawn with c = 1.
            return distr::poisson(rng, alpha_n * distr::gamma(rng, spec.kappa + x, 1.0));
        case Family::ARG: {
            const double z = distr::poisson(rng, alpha_n / spec.c * x);
            return distr::gamma(rng, spec.kappa + z, spec.c);
        }
        case Family::ARG0: {
            const double z = distr::poisson(rng, alpha_n / spec.theta * x + spec.b);
            return z == 0.0 ? 0.0 : distr::gamma(rng, z, spec.theta);
        }
        case Family::LinearAR1:
            return alpha_n * x + spec.mu + spec.sigma_eps * rng.normal();
    }
    return 0.0;
}

double marginal_mean(const AffineSpec& spec, double alpha_n) {
    if (!(alpha_n < 1.0)) {
        throw NotStationary("marginal mean requires alpha_n < 1 (got " + std::to_string(alpha_n) + ")");
    }
    return coefficients(spec, alpha_n).mu / (1.0 - alpha_n);
}

RegimeSpec RegimeSpec::local_to_unity(double gamma) {
    RegimeSpec r;
    r.kind = RegimeKind::LocalToUnity;
    r.gamma = gamma;
    return r;
}

RegimeSpec RegimeSpec::mildly_integrated(double gamma_sign, double tau) {
    if (gamma_sign == 0.0) {
        throw InvalidInput("mildly integrated regime needs gamma != 0");
    }
    if (!(tau > 0.0 && tau < 1.0)) {
        throw InvalidInput("mildly integrated regime needs tau in (0, 1)");
    }
    RegimeSpec r;
    r.kind = RegimeKind::MildlyIntegrated;
    r.gamma = gamma_sign > 0.0 ? 1.0 : -1.0;
    r.tau = tau;
    return r;
}

RegimeSpec RegimeSpec::mildly_integrated_kn(double gamma_sign, double kn) {
    if (gamma_sign == 0.0) {
        throw InvalidInput("mildly integrated regime needs gamma != 0");
    }
    if (!(kn > 0.0)) {
        throw InvalidInput("k_n override must be positive");
    }
    RegimeSpec r;
    r.kind = RegimeKind::MildlyIntegrated;
    r.gamma = gamma_sign > 0.0 ? 1.0 : -1.0;
    r.kn = kn;
    return r;
}

ResolvedAlpha resolve_alpha(const RegimeSpec& regime, std::size_t n) {
    if (n < 2) {
        throw InvalidInput("resolve_alpha: sample size must be at least 2");
    }
    const double nd = static_cast<double>(n);
    if (regime.kind == RegimeKind::LocalToUnity) {
        return {1.0 + regime.gamma / nd, std::nullopt};
    }
    const double kn = regime.kn ? *regime.kn : std::pow(nd, regime.tau);
    if (kn < 2.0 || kn >= nd) {
        throw RegimeInfeasible("k_n = " + std::to_string(kn) + " must satisfy 2 <= k_n < n = " +
                               std::to_string(n));
    }
    const double sign = regime.gamma > 0.0 ? 1.0 : -1.0;
    return {1.0 + sign / kn, kn};
}

void simulate_into(const AffineSpec& spec, double alpha_n, std::size_t n, double x0, Stream& rng,
                   std::vector<double>& out) {
    out.resize(n + 1);
    out[0] = x0;
    double x = x0;
    for (std::size_t t = 1; t <= n; ++t) {
        x = step(spec, alpha_n, x, rng);
        out[t] = x;
    }
}

Trajectory simulate_alpha(const AffineSpec& spec, double alpha_n, std::size_t n, double x0,
                          std::uint64_t seed, std::uint64_t stream) {
    spec.validate();
    if (spec.is_nonnegative() && !(x0 >= 0.0)) {
        throw InvalidInput("initial value must be nonnegative");
    }
    Trajectory traj;
    Stream rng(seed, stream);
    simulate_into(spec, alpha_n, n, x0, rng, traj.values);
    traj.provenance = Provenance{spec, std::nullopt, alpha_n, seed, stream};
    return traj;
}

Trajectory simulate(const AffineSpec& spec, const RegimeSpec& regime, std::size_t n, double x0,
                    std::uint64_t seed, std::uint64_t stream) {
    if (n == 0) {
        spec.validate();
        Trajectory traj;
        traj.values = {x0};
        traj.provenance = Provenance{spec, regime, 1.0, seed, stream};
        return traj;
    }
    const ResolvedAlpha resolved = resolve_alpha(regime, n);
    Trajectory traj = simulate_alpha(spec, resolved.alpha, n, x0, seed, stream);
    traj.provenance->regime = regime;
    return traj;
}

}  // namespace nearunit
