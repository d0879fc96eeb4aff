#include <doctest.h>

#include <cmath>

#include "reslab/closed_forms.hpp"
#include "reslab/driver.hpp"
#include "reslab/errors.hpp"
#include "reslab/estimators.hpp"
#include "reslab/noise.hpp"
#include "reslab/paths.hpp"
#include "reslab/toolkit.hpp"

using namespace reslab;

TEST_CASE("acceptance decisions") {
    auto est = [](double v, double se, double t) {
        RateEstimate r;
        r.value = v;
        r.std_error = se;
        r.time = t;
        return r;
    };
    const auto put = est(-78.0, 0.05, 0.5);
    CHECK(is_acceptable(put, {AcceptanceLevel::finite(0.0), 0.5}).accepted);
    CHECK_FALSE(is_acceptable(put, {AcceptanceLevel::finite(0.0), 0.5}).marginal);
    const auto bond = est(0.05, 1e-4, 0.5);
    CHECK_FALSE(is_acceptable(bond, {AcceptanceLevel::finite(0.0), 0.5}).accepted);
    const auto zero = RateEstimate::exact(0.0, 0.5);
    const auto d = is_acceptable(zero, {AcceptanceLevel::finite(0.0), 0.5});
    CHECK(d.accepted);
    CHECK(min_acceptance_level(put) == -78.0);
    CHECK(is_acceptable(put, {AcceptanceLevel::finite(min_acceptance_level(put)), 0.5}).accepted);
    CHECK_FALSE(is_acceptable(put, {AcceptanceLevel::finite(-78.0 - 3 * 0.05), 0.5}).accepted);
    CHECK(is_acceptable(bond, {AcceptanceLevel::plus_infinity(), 0.5}).accepted);
    CHECK_FALSE(is_acceptable(put, {AcceptanceLevel::minus_infinity(), 0.5}).accepted);
    CHECK_THROWS_AS(is_acceptable(put, {AcceptanceLevel::finite(0.0), 0.2}), DomainError);
    CHECK_THROWS_AS(AcceptanceLevel::finite(INFINITY), DomainError);
    CHECK_THROWS(AcceptanceLevel::plus_infinity().value());
}

TEST_CASE("acceptance family properties") {
    RateEstimate base, shifted, scaled;
    base.value = shifted.value = -0.4;
    scaled.value = -0.8;
    DriverFlags flags = drivers::linear_brownian(0.1, 0.1).flags();
    const auto checks = acceptance_family_properties({flags, base, shifted, scaled, 2.0, 1.0});
    CHECK(checks.size() == 6);
    for (const auto& c : checks) CHECK(c.passed);
    RateEstimate flipped;
    flipped.value = 0.8;
    const auto bad = acceptance_family_properties({flags, base, shifted, flipped, 2.0, 1.0});
    bool any_failed = false;
    for (const auto& c : bad) any_failed = any_failed || !c.passed;
    CHECK(any_failed);
}

TEST_CASE("rate curve interpolation and integral") {
    const RateCurve c({0.0, 0.5}, {1.0, 3.0}, 1.0);
    CHECK(c(0.25) == doctest::Approx(2.0));
    CHECK(c(0.9) == 3.0);
    CHECK(c.integral(0.0, 1.0) == doctest::Approx(0.5 * 0.5 * 4.0 + 0.5 * 3.0));
    CHECK(c.integral(0.5, 0.25) == doctest::Approx(-0.25 * 2.5));
    CHECK_THROWS_AS(RateCurve({0.5, 0.2}, {1, 1}, 1.0), ConfigError);
    CHECK_THROWS_AS(RateCurve({0.0, 1.0}, {1, 1}, 1.0), ConfigError);
    const std::vector<double> ones = {1.0, 1.0}, zeros = {0.0, 0.0}, bad = {1.0};
    CHECK(rra(c, ones, 0.0) == doctest::Approx(c.integral(0.0, 1.0)));
    CHECK(rra(c, zeros, 0.3) == 0.0);
    CHECK_THROWS_AS(rra(c, bad, 0.0), ConfigError);
}

TEST_CASE("resilience-neutral driver shifts the solution") {
    const RateCurve c({0.0, 0.5}, {1.0, 3.0}, 1.0);
    const auto g = resilience_neutral_driver(drivers::linear_in_y(0.5), c);
    const double y = 2.0, t = 0.25;
    const std::vector<double> z = {0.0};
    // g(y - int_t^T curve) + curve(t)
    CHECK(g.evaluate(t, 0.0, y, z) == doctest::Approx(0.5 * (y - c.integral(t, 1.0)) + 2.0));
    // zero curve leaves the driver unchanged
    const auto same = resilience_neutral_driver(drivers::bond(), RateCurve({0.0}, {0.0}, 1.0));
    CHECK(same.evaluate(0.3, 0.04, 0.9, z) == doctest::Approx(drivers::bond().evaluate(0.3, 0.04, 0.9, z)));
}

TEST_CASE("adjusted risk expansion recovers (1 - c) times the rate") {
    // deterministic risk paths with a known rate curve
    const TimeGrid g(1.0, 100);
    PathTable paths(50, g.size());
    std::vector<double> times, values;
    for (std::size_t k = 0; k < g.n_steps(); ++k) {
        times.push_back(g.time(k));
        values.push_back(-2.0 + g.time(k));
    }
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double t = g.time(k);
            paths(i, k) = 5.0 - 2.0 * t + 0.5 * t * t + 0.01 * static_cast<double>(i);
        }
    const RateCurve curve(times, values, 1.0);
    const std::vector<std::size_t> offsets = {2, 4, 6, 8};
    for (double cval : {0.0, 0.5, 1.0}) {
        const std::vector<double> rescale(times.size(), cval);
        const auto rep = adjusted_risk_expansion_check(paths, g, curve, rescale, 30, offsets);
        CHECK(rep.expected_slope == doctest::Approx((1 - cval) * (-2.0 + 0.3)));
        CHECK(rep.fitted_slope == doctest::Approx(rep.expected_slope).epsilon(1e-6));
    }
}
