#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nearunit/cir.hpp"
#include "nearunit/error.hpp"
#include "properties.hpp"

using namespace nearunit;
using cir::CirParams;

TEST_CASE("stationary moments are the raw moments of the gamma invariant law") {
    for (auto [mu, s2] : {std::pair{1.0, 1.0}, std::pair{2.5, 0.4}, std::pair{0.3, 3.0}}) {
        const double k = 2.0 * mu / s2;
        const double th = s2 / 2.0;
        const auto m = cir::stationary_moments(mu, s2);
        CHECK(m.m1 == doctest::Approx(k * th));
        CHECK(m.m2 == doctest::Approx(k * (k + 1) * th * th));
        CHECK(m.m3 == doctest::Approx(k * (k + 1) * (k + 2) * th * th * th));
    }
    const auto unit = cir::stationary_moments(1.0, 1.0);
    CHECK(unit.m2 == 1.5);
    CHECK(unit.m3 == 3.0);
}

TEST_CASE("feller condition") {
    CHECK(cir::feller_check(1.0, 2.0));
    CHECK(cir::feller_check(1.0, 1.0));
    CHECK_FALSE(cir::feller_check(0.4, 1.0));
}

TEST_CASE("exact transition matches the moment equations") {
    std::uint64_t seed = 0;
    for (double gamma : {-1.0, 0.0, 1.0}) {
        for (double y : {0.0, 2.0}) {
            const CirParams p{1.0, gamma, 1.0};
            Stream rng(31, ++seed);
            std::vector<double> d(100000);
            for (auto& v : d) v = cir::sample_exact_transition(p, y, 0.7, rng);
            double mean = 0.0;
            double var = 0.0;
            props::cir_moments_ode(p, y, 0.7, mean, var);
            const auto z = props::moment_z(d, mean, var);
            CAPTURE(gamma);
            CAPTURE(y);
            CHECK(std::fabs(z.mean_z) < 5.0);
            CHECK(std::fabs(z.var_z) < 5.0);
        }
    }
}

TEST_CASE("zero volatility gives the deterministic flow") {
    const CirParams p{1.0, -1.0, 0.0};
    Stream rng(1, 0);
    CHECK(cir::sample_exact_transition(p, 2.0, 0.5, rng) == doctest::Approx(2.0 * std::exp(-0.5) + (1 - std::exp(-0.5))));
}

TEST_CASE("Euler and exact transitions agree") {
    const CirParams p{1.0, -1.0, 1.0};
    const auto r = props::euler_vs_exact(p, 1.0, 1.0, 20000, 400, 5);
    CHECK(std::fabs(r.exact.mean_z) < 5.0);
    CHECK(std::fabs(r.exact.var_z) < 5.0);
    CHECK(std::fabs(r.mean_gap_z) < 5.0);
    CHECK(std::fabs(r.euler.sample_var / r.exact.sample_var - 1.0) < 0.05);
}

TEST_CASE("Euler paths are nonnegative and driven by their increments") {
    const CirParams p{0.2, -1.0, 2.0};
    Stream rng(8, 0);
    const auto e = cir::simulate_path_euler(p, 0.0, 1.0, 500, rng);
    CHECK(e.path.size() == 501);
    CHECK(e.increments.size() == 500);
    CHECK(*std::min_element(e.path.begin(), e.path.end()) >= 0.0);
    CHECK(cir::euler_path_from_increments(p, 0.0, 1.0 / 500, e.increments) == e.path);
}

TEST_CASE("ergodic averages reach the stationary moments") {
    const auto e = props::ergodic_moments(1.0, 1.0, 40000.0, 0.5, 3);
    const auto m = cir::stationary_moments(1.0, 1.0);
    CHECK(e.m1 == doctest::Approx(m.m1).epsilon(0.03));
    CHECK(e.m2 == doctest::Approx(m.m2).epsilon(0.06));
    CHECK(e.m3 == doctest::Approx(m.m3).epsilon(0.15));
}

TEST_CASE("Feller dichotomy: paths approach zero only when 2 mu < sigma^2") {
    auto near_zero_fraction = [](double mu, double s2) {
        const CirParams p{mu, -1.0, s2};
        Stream rng(4, 0);
        double y = mu;
        std::size_t hits = 0;
        const std::size_t steps = 200000;
        for (std::size_t i = 0; i < steps; ++i) {
            y = cir::sample_exact_transition(p, y, 0.05, rng);
            hits += y < 1e-6;
        }
        return static_cast<double>(hits) / steps;
    };
    CHECK(near_zero_fraction(1.0, 1.0) == 0.0);
    CHECK(near_zero_fraction(0.05, 1.0) > 0.05);
}

TEST_CASE("tabulation is reproducible for any worker count") {
    cir::TabulateOptions o;
    o.paths = 300;
    o.steps = 200;
    o.seed = 17;
    o.threads = 1;
    const LimitTable a = cir::tabulate_ltu_limit({1.0, -1.0, 1.0}, o);
    o.threads = 4;
    const LimitTable b = cir::tabulate_ltu_limit({1.0, -1.0, 1.0}, o);
    CHECK(a.samples == b.samples);
    CHECK(a.labels == std::vector<std::string>{"alpha_limit", "mu_limit"});
    CHECK(a.rows() == 300);
}

TEST_CASE("without noise the local-to-unity limit is exactly zero") {
    cir::TabulateOptions o;
    o.paths = 20;
    o.steps = 100;
    const LimitTable t = cir::tabulate_ltu_limit({1.0, -1.0, 0.0}, o);
    for (double v : t.samples) CHECK(v == 0.0);
}

TEST_CASE("explosive limit: mean zero, variance (4/3) / (mu - sigma^2/2)") {
    for (auto [mu, s2] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}}) {
        const LimitTable t = cir::sample_explosive_limit({mu, 1.0, s2}, 200000, 21);
        const auto x = t.column(0);
        const double target = (4.0 / 3.0) / (mu - s2 / 2.0);
        const auto z = props::moment_z(x, 0.0, target);
        CHECK(std::fabs(z.mean_z) < 5.0);
        CHECK(z.sample_var == doctest::Approx(target).epsilon(0.05));
    }
    CHECK_THROWS_AS((void)cir::sample_explosive_limit({1.0, -1.0, 1.0}, 10, 1), InvalidInput);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(CirParams({-1.0, -1.0, 1.0}).validate(), InvalidInput);
    CHECK_THROWS_AS(CirParams({1.0, -1.0, NAN}).validate(), InvalidInput);
    CHECK_NOTHROW(CirParams({0.0, -1.0, 0.0}).validate());
}
