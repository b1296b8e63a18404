#include "nearunit/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nearunit/error.hpp"
#include "nearunit/stats.hpp"

namespace nearunit {

namespace {

constexpr double kRelDetTol = 1e-12;

void check_series(std::span<const double> series) {
    if (series.size() < 4) {
        throw InvalidInput("estimation needs at least 3 transitions (4 observations), got " +
                           std::to_string(series.size()) + " observations");
    }
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (!std::isfinite(series[t])) {
            throw InvalidInput("non-finite value at index " + std::to_string(t));
        }
    }
}

void fill_derived(EstimateResult& r, std::span<const double> series) {
    const std::size_t n = series.size() - 1;
    r.n = n;
    r.residuals.resize(n);
    double lag_sum = 0.0;
    double w2_sum = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
        const double w = series[t] - r.alpha_hat * series[t - 1] - r.mu_hat;
        r.residuals[t - 1] = w;
        w2_sum += w * w;
        lag_sum += series[t - 1];
    }
    r.sigma2_hat = lag_sum > 0.0 ? w2_sum / lag_sum : std::numeric_limits<double>::quiet_NaN();
    r.feller_warning = r.sigma2_hat >= 2.0 * r.mu_hat;
    if (r.alpha_hat < 1.0) {
        r.k_hat = 1.0 / (1.0 - r.alpha_hat);
        r.tau_hat = std::log(*r.k_hat) / std::log(static_cast<double>(n));
    }
}

}  // namespace

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::OLS: return "ols";
        case Method::WLS: return "wls";
        case Method::PoissonQML: return "poisson-qml";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "ols") return Method::OLS;
    if (name == "wls") return Method::WLS;
    if (name == "poisson-qml" || name == "qml" || name == "poisson") return Method::PoissonQML;
    throw InvalidInput("unknown estimation method '" + std::string(name) + "'");
}

LsFit weighted_ls(std::span<const double> series, std::span<const double> weights) {
    const std::size_t n = series.size() - 1;
    const bool unit = weights.empty();
    if (!unit && weights.size() != n) {
        throw InvalidInput("weight vector length must equal the number of transitions");
    }
    double shift = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        shift += series[t];
    }
    shift /= static_cast<double>(n);

    double sw = 0.0;
    double su = 0.0;
    double sv = 0.0;
    double suu = 0.0;
    double suv = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double w = unit ? 1.0 : weights[t];
        const double u = series[t] - shift;
        const double v = series[t + 1] - shift;
        const double wu = w * u;
        sw += w;
        su += wu;
        sv += w * v;
        suu += wu * u;
        suv += wu * v;
    }
    const double sxx = suu - su * su / sw;
    if (!(sw > 0.0) || !(suu > 0.0) || !(sxx > kRelDetTol * suu)) {
        throw DegenerateDesign("Gram matrix is singular: the lagged series has no usable variation");
    }
    const double sxy = suv - su * sv / sw;
    const double alpha = sxy / sxx;
    const double mu_shifted = (sv - alpha * su) / sw;
    return {alpha, mu_shifted + shift * (1.0 - alpha)};
}

EstimateResult ols(std::span<const double> series) {
    check_series(series);
    const LsFit fit = weighted_ls(series);
    EstimateResult r;
    r.method = Method::OLS;
    r.alpha_hat = fit.alpha;
    r.mu_hat = fit.mu;
    fill_derived(r, series);
    return r;
}

EstimateResult wls(std::span<const double> series) {
    check_series(series);
    std::vector<double> w(series.size() - 1);
    for (std::size_t t = 0; t < w.size(); ++t) {
        const double denom = 1.0 + series[t];
        if (!(denom > 0.0)) {
            throw InvalidInput("WLS weight 1/(1 + X) undefined at index " + std::to_string(t));
        }
        w[t] = 1.0 / denom;
    }
    const LsFit fit = weighted_ls(series, w);
    EstimateResult r;
    r.method = Method::WLS;
    r.alpha_hat = fit.alpha;
    r.mu_hat = fit.mu;
    fill_derived(r, series);
    return r;
}

namespace {

struct QmlEval {
    double loglik = -std::numeric_limits<double>::infinity();
    Vec2 grad;
    Mat2 neg_hess;
};

/// Quasi-loglikelihood without the ln X! term; -inf when a positive count
/// meets a nonpositive intensity.
QmlEval qml_eval(std::span<const double> x, double alpha, double mu, bool derivatives) {
    QmlEval e;
    double ll = 0.0;
    double ga = 0.0;
    double gm = 0.0;
    double haa = 0.0;
    double ham = 0.0;
    double hmm = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        const double lag = x[t - 1];
        const double lam = alpha * lag + mu;
        if (!(lam > 0.0)) {
            return e;
        }
        ll += -lam + (x[t] > 0.0 ? x[t] * std::log(lam) : 0.0);
        if (derivatives) {
            const double r = x[t] / lam - 1.0;
            const double c = x[t] / (lam * lam);
            ga += r * lag;
            gm += r;
            haa += c * lag * lag;
            ham += c * lag;
            hmm += c;
        }
    }
    e.loglik = ll;
    e.grad = {ga, gm};
    e.neg_hess = {haa, ham, ham, hmm};
    return e;
}

}  // namespace

EstimateResult poisson_qmle(std::span<const double> series, const QmlOptions& opt) {
    check_series(series);
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (series[t] < 0.0) {
            throw InvalidInput("Poisson QML needs a nonnegative series; index " + std::to_string(t) +
                               " is negative");
        }
    }
    const LsFit start = weighted_ls(series);
    const auto n = static_cast<double>(series.size() - 1);
    double alpha = std::max(start.alpha, 0.0);
    double mu = start.mu;
    if (!(mu > opt.mu_floor)) {
        mu = std::max(0.1 * stats::mean(series), 10.0 * opt.mu_floor);
    }

    QmlEval cur = qml_eval(series, alpha, mu, true);
    std::size_t iter = 0;
    bool converged = false;
    double gnorm = 0.0;
    for (; iter <= opt.max_iter; ++iter) {
        // Coordinates pinned at a bound only need the outward score to vanish.
        const double ga = (alpha == 0.0 && cur.grad.a < 0.0) ? 0.0 : cur.grad.a;
        const double gm = (mu == opt.mu_floor && cur.grad.b < 0.0) ? 0.0 : cur.grad.b;
        gnorm = std::max(std::abs(ga), std::abs(gm)) / n;
        if (gnorm < opt.tol) {
            converged = true;
            break;
        }
        if (iter == opt.max_iter) {
            break;
        }
        Vec2 d;
        const double det = cur.neg_hess.det();
        if (det > 0.0) {
            d = cur.neg_hess.inverse() * Vec2{ga, gm};
        } else {
            // Flat curvature (e.g. all-zero counts): gradient ascent step.
            d = {ga, gm};
        }
        double s = 1.0;
        bool moved = false;
        QmlEval next;
        double na = alpha;
        double nm = mu;
        for (int k = 0; k < 60; ++k, s *= 0.5) {
            na = std::max(alpha + s * d.a, 0.0);
            nm = std::max(mu + s * d.b, opt.mu_floor);
            next = qml_eval(series, na, nm, true);
            if (next.loglik >= cur.loglik) {
                moved = true;
                break;
            }
        }
        if (!moved) {
            break;
        }
        const bool stalled = na == alpha && nm == mu;
        alpha = na;
        mu = nm;
        cur = next;
        if (stalled) {
            // A full step no longer moves the iterate: machine-precision optimum.
            converged = true;
            ++iter;
            break;
        }
    }
    if (mu <= opt.mu_floor) {
        throw BoundaryHit("Poisson QML intercept pinned at the floor " + std::to_string(opt.mu_floor) +
                          " (alpha = " + std::to_string(alpha) + ")");
    }
    if (!converged) {
        throw NoConvergence("Poisson QML stopped after " + std::to_string(iter) +
                            " iterations at alpha = " + std::to_string(alpha) + ", mu = " +
                            std::to_string(mu) + ", score norm = " + std::to_string(gnorm));
    }
    EstimateResult r;
    r.method = Method::PoissonQML;
    r.alpha_hat = alpha;
    r.mu_hat = mu;
    r.iterations = iter;
    r.gradient_norm = gnorm;
    fill_derived(r, series);
    return r;
}

EstimateResult estimate(std::span<const double> series, Method method) {
    switch (method) {
        case Method::OLS: return ols(series);
        case Method::WLS: return wls(series);
        case Method::PoissonQML: return poisson_qmle(series);
    }
    throw InvalidInput("unknown method");
}

double sigma2_hat(std::span<const double> series, double alpha_hat, double mu_hat) {
    if (series.size() < 2) {
        throw InvalidInput("sigma2_hat needs at least one transition");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double w = series[t] - alpha_hat * series[t - 1] - mu_hat;
        num += w * w;
        den += series[t - 1];
    }
    if (den == 0.0) {
        throw ZeroDenominator("sigma2_hat: every lagged value is zero");
    }
    return num / den;
}

VarianceExponent variance_exponent(std::span<const double> series) {
    const EstimateResult fit = ols(series);
    std::vector<double> lx;
    std::vector<double> ly;
    VarianceExponent out;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double w = fit.residuals[t - 1];
        if (series[t - 1] > 0.0 && w != 0.0) {
            lx.push_back(std::log(series[t - 1]));
            ly.push_back(std::log(w * w));
        } else {
            ++out.dropped;
        }
    }
    out.used = lx.size();
    if (out.used < 10) {
        throw InsufficientData("variance_exponent needs 10 points with X_{t-1} > 0 and W_t != 0, got " +
                               std::to_string(out.used));
    }
    const double mx = stats::mean(lx);
    const double my = stats::mean(ly);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw InsufficientData("variance_exponent: log X_{t-1} has no variation");
    }
    const double slope = sxy / sxx;
    const double rss = std::max(syy - slope * sxy, 0.0);
    const auto m = static_cast<double>(out.used);
    const double se = std::sqrt(rss / (m - 2.0) / sxx);
    out.a_hat = slope;
    out.ci_halfwidth = stats::student_t_quantile(0.975, m - 2.0) * se;
    out.r2 = syy > 0.0 ? 1.0 - rss / syy : 0.0;
    return out;
}

OlsError ols_error(std::span<const double> lagged, std::span<const double> innovations) {
    if (lagged.size() != innovations.size() || lagged.size() < 3) {
        throw InvalidInput("ols_error needs matching lagged/innovation vectors of length >= 3");
    }
    long double sx = 0.0L;
    long double sxx = 0.0L;
    long double sw = 0.0L;
    long double sxw = 0.0L;
    for (std::size_t t = 0; t < lagged.size(); ++t) {
        const long double x = lagged[t];
        const long double w = innovations[t];
        sx += x;
        sxx += x * x;
        sw += w;
        sxw += x * w;
    }
    const auto n = static_cast<long double>(lagged.size());
    const long double det = n * sxx - sx * sx;
    if (!(det > static_cast<long double>(kRelDetTol) * n * sxx)) {
        throw DegenerateDesign("ols_error: singular Gram matrix");
    }
    return {(n * sxw - sx * sw) / det, (sxx * sw - sx * sxw) / det};
}

}  // namespace nearunit
