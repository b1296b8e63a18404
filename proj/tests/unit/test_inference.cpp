#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "nearunit/affine_models.hpp"
#include "nearunit/error.hpp"
#include "nearunit/inference.hpp"
#include "nearunit/stats.hpp"

using namespace nearunit;

namespace {

// Exact rational arithmetic for the plug-in covariance oracle.
struct Q {
    long long p = 0;
    long long q = 1;
    Q(long long a = 0, long long b = 1) : p(a), q(b) { norm(); }
    void norm() {
        if (q < 0) p = -p, q = -q;
        const long long g = std::gcd(p < 0 ? -p : p, q);
        if (g > 1) p /= g, q /= g;
    }
    friend Q operator+(Q a, Q b) { return {a.p * b.q + b.p * a.q, a.q * b.q}; }
    friend Q operator-(Q a, Q b) { return {a.p * b.q - b.p * a.q, a.q * b.q}; }
    friend Q operator*(Q a, Q b) { return {a.p * b.p, a.q * b.q}; }
    friend Q operator/(Q a, Q b) { return {a.p * b.q, a.q * b.p}; }
    [[nodiscard]] double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

struct QMat {
    Q xx, xy, yx, yy;
    friend QMat operator*(const QMat& a, const QMat& b) {
        return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy, a.yx * b.xx + a.yy * b.yx,
                a.yx * b.xy + a.yy * b.yy};
    }
};

// Omega^{-1} (s2 Sigma) Omega^{-1} with Omega = [[m2, m1], [m1, 1]], Sigma = [[m3, m2], [m2, m1]].
QMat rational_plugin(Q mu, Q s2) {
    const Q m1 = mu;
    const Q m2 = mu * (mu + s2 / Q(2));
    const Q m3 = m2 * (mu + s2);
    const Q det = m2 - m1 * m1;
    const QMat inv{Q(1) / det, Q(0) - m1 / det, Q(0) - m1 / det, m2 / det};
    const QMat sig{s2 * m3, s2 * m2, s2 * m2, s2 * m1};
    return inv * sig * inv;
}

std::vector<double> inarch(double alpha, std::size_t n, std::uint64_t seed) {
    return simulate_alpha(AffineSpec::inarch(1.0), alpha, n, 0.0, seed, 0).values;
}

}  // namespace

TEST_CASE("plug-in covariance at mu = sigma2 = 1 is [[4, -3], [-3, 3]] exactly") {
    const Mat2 c = plugin_covariance(1.0, 1.0);
    CHECK(c.xx == 4.0);
    CHECK(c.xy == -3.0);
    CHECK(c.yx == -3.0);
    CHECK(c.yy == 3.0);
    const QMat r = rational_plugin(Q(1), Q(1));
    CHECK(r.xx.p == 4);
    CHECK(r.xy.p == -3);
    CHECK(r.yy.p == 3);
}

TEST_CASE("plug-in covariance matches the rational oracle at other points") {
    for (auto [mp, mq, sp, sq] : {std::array<long long, 4>{2, 1, 1, 2}, {3, 2, 5, 1}, {7, 3, 2, 3}}) {
        const QMat r = rational_plugin(Q(mp, mq), Q(sp, sq));
        const Mat2 c = plugin_covariance(static_cast<double>(mp) / mq, static_cast<double>(sp) / sq);
        CHECK(c.xx == doctest::Approx(r.xx.value()).epsilon(1e-13));
        CHECK(c.xy == doctest::Approx(r.xy.value()).epsilon(1e-13));
        CHECK(c.yy == doctest::Approx(r.yy.value()).epsilon(1e-13));
    }
    // Closed form of the alpha entry: 2 (sigma2/mu + 1).
    CHECK(plugin_covariance(2.0, 3.0).xx == doctest::Approx(2.0 * (1.5 + 1.0)));
}

TEST_CASE("plug-in covariance rejects singular inputs") {
    CHECK_THROWS_AS((void)plugin_covariance(0.0, 1.0), SingularOmega);
    CHECK_THROWS_AS((void)plugin_covariance(1.0, 0.0), SingularOmega);
    CHECK_THROWS_AS((void)plugin_covariance(NAN, 1.0), SingularOmega);
}

TEST_CASE("plug-in intervals use k_hat in place of k_n") {
    const auto x = inarch(0.95, 2000, 1);
    const EstimateResult e = ols(x);
    REQUIRE(e.alpha_hat < 1.0);
    PluginOptions o;
    o.sigma2 = 1.0;
    const PluginInference p = plugin_ci(e, 0.9, o);
    const double n = static_cast<double>(e.n);
    const double gap = 1.0 - e.alpha_hat;
    const Mat2 c = plugin_covariance(e.mu_hat, 1.0);
    CHECK(p.se_alpha == doctest::Approx(std::sqrt(c.xx * gap / n)));
    CHECK(p.se_mu == doctest::Approx(std::sqrt(c.yy / (n * gap))));
    CHECK(p.ci_mu.lo == doctest::Approx(e.mu_hat - 1.6448536269514722 * p.se_mu));
    CHECK(p.sigma2_used == 1.0);
    CHECK(p.ci_alpha.hi <= 1.0);
    CHECK(plugin_ci(e, 0.9).sigma2_used == e.sigma2_hat);
}

TEST_CASE("plug-in refuses alpha_hat >= 1") {
    const EstimateResult e = ols(std::vector<double>{0, 1, 2, 3});
    CHECK_THROWS_AS((void)plugin_ci(e, 0.9), AlphaAtOrAboveOne);
}

TEST_CASE("plug-in region caps at one") {
    EstimateResult e;
    e.alpha_hat = 0.99;
    e.mu_hat = 5.0;
    e.sigma2_hat = 5.0;
    e.n = 100;
    const PluginInference p = plugin_ci(e, 0.9);
    CHECK(p.capped);
    CHECK(p.ci_alpha.hi == 1.0);
    PluginOptions o;
    o.cap = false;
    CHECK(plugin_ci(e, 0.9, o).ci_alpha.hi > 1.0);
}

TEST_CASE("sandwich variance equals the explicit M^-1 S M^-1 / n") {
    const auto x = inarch(0.9, 500, 2);
    const EstimateResult e = ols(x);
    const SandwichResult s = sandwich_se(x, e);
    double mxx = 0, mx = 0, sxx = 0, sx = 0, s1 = 0;
    const double n = static_cast<double>(x.size() - 1);
    for (std::size_t t = 1; t < x.size(); ++t) {
        const double w = x[t] - e.alpha_hat * x[t - 1] - e.mu_hat;
        mxx += x[t - 1] * x[t - 1];
        mx += x[t - 1];
        sxx += w * w * x[t - 1] * x[t - 1];
        sx += w * w * x[t - 1];
        s1 += w * w;
    }
    // (X'X)^{-1} (X' diag(W^2) X) (X'X)^{-1}
    const double det = mxx * n - mx * mx;
    const double ixx = n / det, ixy = -mx / det;
    const double v_aa = ixx * (sxx * ixx + sx * ixy) + ixy * (sx * ixx + s1 * ixy);
    CHECK(s.se_alpha == doctest::Approx(std::sqrt(v_aa)).epsilon(1e-10));
}

TEST_CASE("degenerate weights give the point estimate bit for bit") {
    const auto x = inarch(0.96, 3000, 3);
    BootstrapOptions o;
    o.B = 50;
    o.weights = WeightDist::Degenerate1;
    const BootstrapDraws d = bootstrap(x, o);
    const EstimateResult e = ols(x);
    for (std::size_t b = 0; b < d.B; ++b) {
        REQUIRE(d.alpha[b] == e.alpha_hat);
        REQUIRE(d.mu[b] == e.mu_hat);
    }
    CHECK(bootstrap_sd(d.alpha) == 0.0);
}

TEST_CASE("bootstrap draws are identical across worker counts and the serial path") {
    const auto x = inarch(0.95, 800, 4);
    BootstrapOptions o;
    o.B = 200;
    o.seed = 99;
    o.threads = 1;
    const BootstrapDraws a = bootstrap(x, o);
    o.threads = 4;
    const BootstrapDraws b = bootstrap(x, o);
    BootstrapDraws c;
    std::vector<double> buf;
    bootstrap_into(x, o, c, buf);
    CHECK(a.alpha == b.alpha);
    CHECK(a.mu == b.mu);
    CHECK(a.alpha == c.alpha);
}

TEST_CASE("weight laws have mean one and variance one") {
    for (WeightDist w : {WeightDist::Exp1, WeightDist::LogNormal11}) {
        Stream rng(5, 0);
        std::vector<double> v(400000);
        fill_weights(w, rng, v);
        CAPTURE(to_string(w));
        CHECK(*std::min_element(v.begin(), v.end()) > 0.0);
        CHECK(stats::mean(v) == doctest::Approx(1.0).epsilon(0.01));
        CHECK(stats::variance(v) == doctest::Approx(1.0).epsilon(0.05));
    }
    Stream rng(5, 0);
    std::vector<double> ones(10, 0.0);
    fill_weights(WeightDist::Degenerate1, rng, ones);
    CHECK(ones == std::vector<double>(10, 1.0));
    CHECK(parse_weight_dist("exp") == WeightDist::Exp1);
    CHECK(parse_weight_dist("lognormal11") == WeightDist::LogNormal11);
    CHECK_THROWS_AS((void)parse_weight_dist("uniform"), InvalidInput);
}

TEST_CASE("bootstrap intervals") {
    const auto x = inarch(0.95, 2000, 6);
    BootstrapOptions o;
    o.B = 400;
    const BootstrapDraws d = bootstrap(x, o);
    const BootstrapCi ci = bootstrap_ci(d, 0.9);
    CHECK(ci.se_alpha == doctest::Approx(bootstrap_sd(d.alpha)));
    CHECK(ci.ci_mu.lo == doctest::Approx(d.base.mu - 1.6448536269514722 * ci.se_mu));
    CHECK(ci.pct_alpha.lo < ci.pct_alpha.hi);
    o.B = 50;
    CHECK_THROWS_AS((void)bootstrap_ci(bootstrap(x, o), 0.9), InvalidInput);
}

TEST_CASE("t test and p-values") {
    const TestResult r = make_test(0.9, 0.02, 0.95, TestMethod::PluginSE, std::vector<double>{0.01, 0.05, 0.10});
    CHECK(r.t_stat == doctest::Approx(-2.5));
    CHECK(r.p_value == doctest::Approx(2.0 * (1.0 - stats::normal_cdf(2.5))));
    CHECK(r.decision_at.at(0.05));
    CHECK_FALSE(r.decision_at.at(0.01));
    CHECK(make_test(0.95, 0.0, 0.95, TestMethod::PluginSE, {}).p_value == 1.0);
    CHECK(make_test(0.96, 0.0, 0.95, TestMethod::PluginSE, {}).p_value == 0.0);
    const auto x = inarch(0.95, 500, 7);
    CHECK_THROWS_AS((void)test_alpha(x, 1.0, {}), InvalidInput);
    TestOptions o;
    o.method = TestMethod::SandwichSE;
    CHECK(test_alpha(x, 0.5, o).p_value < 1e-6);
}

TEST_CASE("p-value curve region") {
    const auto x = inarch(0.95, 2000, 8);
    const auto grid = default_alpha_grid();
    CHECK(grid.size() == 300);
    CHECK(grid.front() == 0.7);
    CHECK(grid.back() == 0.999);
    const PvalueCurve c = pvalue_curve(x, grid, {}, 0.10);
    REQUIRE(c.region.size() == 1);
    const double z = stats::two_sided_z(0.9);
    CHECK(c.region[0].lo >= c.alpha_hat - z * c.se - 1e-3);
    CHECK(c.region[0].lo <= c.alpha_hat - z * c.se + 1e-3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK((c.p[i] >= 0.10) == c.region[0].contains(grid[i]));
    }
    const std::vector<double> bad = {0.9, 1.0};
    CHECK_THROWS_AS((void)pvalue_curve(x, bad, {}, 0.10), InvalidInput);
}
