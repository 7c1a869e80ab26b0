#include "doctest.h"

#include "volwin/diagnostics.hpp"
#include "volwin/error.hpp"
#include "volwin/sim.hpp"

#include <cmath>
#include <numeric>

using namespace volwin;
using namespace volwin::models;
using namespace volwin::sim;

namespace {

ParamVector make(double mu, double omega, double alpha, double beta, double gamma = 0.0, double tail = 6.0) {
    ParamVector p;
    p.mu = mu;
    p.omega = omega;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.tail = tail;
    return p;
}

double variance_of(std::span<const double> x) { return sample_variance(x); }

}  // namespace

TEST_CASE("synthetic calendar") {
    CHECK(synthetic_epoch() == Date(2010, 1, 4));
    const auto d = synthetic_dates(10);
    REQUIRE(d.size() == 10);
    CHECK(d[0] == Date(2010, 1, 4));
    CHECK(d[5] == Date(2010, 1, 11));
    for (const auto& x : d) CHECK_FALSE(x.is_weekend());
}

TEST_CASE("unconditional variance") {
    CHECK(*unconditional_variance(Family::garch, make(0, 1e-6, 0.08, 0.90)) == doctest::Approx(5e-5).epsilon(1e-12));
    CHECK(*unconditional_variance(Family::tgarch, make(0, 1e-6, 0.05, 0.85, 0.1)) == doctest::Approx(2e-5).epsilon(1e-12));
    CHECK(*unconditional_variance(Family::egarch, make(0, -0.4, 0.1, 0.95)) == doctest::Approx(std::exp(-8.0)).epsilon(1e-12));
    CHECK_FALSE(unconditional_variance(Family::garch, make(0, 1e-6, 0.1, 0.9)).has_value());
    CHECK_FALSE(unconditional_variance(Family::tgarch, make(0, 1e-6, 0.08, 0.9, 0.1)).has_value());
}

TEST_CASE("degenerate model is iid") {
    const auto path = simulate_path(Family::garch, make(0.002, 4e-4, 0, 0, 0, 0), dists::InnovationLaw::normal(),
                                    200000, 6);
    const auto r = path.returns.values();
    CHECK(sample_mean(r) == doctest::Approx(0.002).epsilon(0.05));
    CHECK(variance_of(r) == doctest::Approx(4e-4).epsilon(0.02));
    for (const double s : path.variance.sigma2) CHECK(s == 4e-4);
}

TEST_CASE("determinism and the unconditional-variance oracle") {
    const auto p = make(0, 1e-6, 0.08, 0.90);
    const auto law = dists::InnovationLaw::student_t(6);
    const auto a = simulate_path(Family::garch, p, law, 1000, 12);
    const auto b = simulate_path(Family::garch, p, law, 1000, 12);
    CHECK(a.returns == b.returns);
    CHECK(a.variance.sigma2 == b.variance.sigma2);
    CHECK_FALSE(a.returns == simulate_path(Family::garch, p, law, 1000, 13).returns);

    const auto big = simulate_path(Family::garch, p, dists::InnovationLaw::normal(), 100000, 99);
    CHECK(std::abs(variance_of(big.returns.values()) / 5e-5 - 1.0) < 0.10);
}

TEST_CASE("filter reproduces the simulator's variance path exactly") {
    const auto law = dists::InnovationLaw::student_t(6);
    const struct {
        Family f;
        ParamVector p;
    } cases[] = {{Family::garch, make(0.0004, 1e-6, 0.08, 0.90)},
                 {Family::tgarch, make(-0.0002, 2e-6, 0.03, 0.88, 0.12)},
                 {Family::egarch, make(0.0001, -0.3, 0.15, 0.96, -0.08)}};
    for (const auto& c : cases) {
        const auto path = simulate_path(c.f, c.p, law, 3000, 4);
        const auto re = filter(c.f, c.p, path.returns.values(), path.variance.init_value);
        REQUIRE(re.sigma2.size() == path.variance.sigma2.size());
        for (std::size_t t = 0; t < re.sigma2.size(); ++t) {
            REQUIRE(std::abs(re.sigma2[t] - path.variance.sigma2[t]) <=
                    std::nextafter(path.variance.sigma2[t], INFINITY) - path.variance.sigma2[t]);
        }
    }
}

TEST_CASE("nonstationary parameters need an explicit init") {
    const auto p = make(0, 1e-6, 0.1, 0.9);
    CHECK_THROWS_AS(simulate_path(Family::garch, p, dists::InnovationLaw::normal(), 100, 1), DomainError);
    const auto path = simulate_path(Family::garch, p, dists::InnovationLaw::normal(), 100, 1, 1e-4);
    CHECK(path.returns.size() == 100);
    CHECK_THROWS_AS(simulate_path(Family::garch, make(0, 1e-6, 0.05, 0.9), dists::InnovationLaw::normal(), 1, 1),
                    DomainError);
}

TEST_CASE("tail parameter is taken from params") {
    auto p = make(0, 1e-6, 0.0, 0.0, 0.0, 4.5);
    const auto heavy = simulate_path(Family::garch, p, dists::InnovationLaw::student_t(30), 5000, 3);
    p.tail = 30.0;
    const auto light = simulate_path(Family::garch, p, dists::InnovationLaw::student_t(30), 5000, 3);
    CHECK_FALSE(heavy.returns == light.returns);
}

TEST_CASE("residual whiteness under true parameters") {
    const auto p = make(0, 1e-6, 0.08, 0.90);
    const auto law = dists::InnovationLaw::student_t(6);
    int pass = 0;
    for (int s = 0; s < 100; ++s) {
        const auto path = simulate_path(Family::garch, p, law, 2000, 300 + s);
        const auto z = standardized_residuals(path.returns.values(), 0.0, path.variance);
        pass += diag::ljung_box(z, 20).p_value.value > 0.01;
    }
    CHECK(pass >= 95);
}

TEST_CASE("regime schedules") {
    const auto law = dists::InnovationLaw::student_t(8);
    const auto calm = make(0, 2e-6, 0.05, 0.90, 0.03, 10.0);
    const auto storm = make(0, 4e-6, 0.03, 0.86, 0.20, 5.0);

    SUBCASE("single segment equals simulate_path") {
        const RegimeSchedule one{Family::tgarch, {{800, calm}}};
        const auto a = simulate_regimes(one, law, 21);
        const auto b = simulate_path(Family::tgarch, calm, law, 800, 21);
        CHECK(a.returns == b.returns);
        CHECK(a.variance.sigma2 == b.variance.sigma2);
        CHECK(a.boundaries == std::vector<std::size_t>{0});
    }
    SUBCASE("continuity across boundaries") {
        const RegimeSchedule two{Family::tgarch, {{600, calm}, {400, storm}, {300, calm}}};
        const auto path = simulate_regimes(two, law, 5);
        CHECK(path.boundaries == std::vector<std::size_t>{0, 600, 1000});
        REQUIRE(path.returns.size() == 1300);
        for (const std::size_t b : {std::size_t{600}, std::size_t{1000}}) {
            const auto& seg = b == 600 ? storm : calm;
            const double eps = path.returns[b - 1] - seg.mu;
            const double prev = path.variance.sigma2[b - 1];
            const double d = eps < 0 ? 1.0 : 0.0;
            const double expected = seg.omega + seg.alpha * eps * eps + seg.gamma * d * eps * eps + seg.beta * prev;
            CHECK(path.variance.sigma2[b] == doctest::Approx(expected).epsilon(1e-14));
        }
        CHECK(path.returns.dates() == synthetic_dates(1300));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(simulate_regimes({Family::garch, {}}, law, 1), DomainError);
        CHECK_THROWS_AS(simulate_regimes({Family::garch, {{0, calm}}}, law, 1), DomainError);
    }
}

TEST_CASE("prices from returns") {
    const auto path = simulate_path(Family::garch, make(0, 1e-6, 0.08, 0.90), dists::InnovationLaw::normal(), 50, 2);
    const auto prices = prices_from_returns(path.returns);
    REQUIRE(prices.size() == 51);
    CHECK(prices.observations()[0].price == 100.0);
    CHECK(prices.observations()[0].date < path.returns.dates()[0]);
    const auto back = prices.prices();
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(std::log(back[i + 1]) - std::log(back[i]) == doctest::Approx(path.returns[i]).epsilon(1e-9));
    }
}
