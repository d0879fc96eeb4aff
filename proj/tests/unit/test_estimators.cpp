#include <doctest.h>

#include <cmath>

#include "reslab/driver.hpp"
#include "reslab/errors.hpp"
#include "reslab/estimators.hpp"
#include "reslab/hitting.hpp"
#include "reslab/noise.hpp"
#include "reslab/paths.hpp"

using namespace reslab;

namespace {

SolutionSample quadratic_paths(const TimeGrid& g, std::size_t n) {
    // rho_t = 3 + 2 t + 5 t^2 on every path: rate at t is 2 + 10 t
    SolutionSample s;
    s.rho = PathTable(n, g.size());
    s.z = PathTable(n, g.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double t = g.time(k);
            s.rho(i, k) = 3 + 2 * t + 5 * t * t;
        }
    return s;
}

}  // namespace

TEST_CASE("finite differences remove the first-order bias") {
    const TimeGrid g(1.0, 100);
    const auto s = quadratic_paths(g, 5);
    const auto eps = default_epsilons(g);
    for (std::size_t k : {0u, 30u, 80u}) {
        const auto r = rate_finite_difference(s.rho, g, k, eps);
        CHECK(r.value == doctest::Approx(2 + 10 * g.time(k)).epsilon(1e-10));
        CHECK(r.method == RateMethod::finite_difference);
        REQUIRE(r.epsilons.size() == 4);
        CHECK(r.epsilons.front() > r.epsilons.back());
        CHECK(r.diag.slope == doctest::Approx(5.0).epsilon(1e-8));
        CHECK(r.time.has_value());
    }
}

TEST_CASE("epsilon schedule is snapped to whole steps") {
    const TimeGrid g(1.0, 10);
    const std::vector<double> eps = {0.33, 0.12, 0.04};
    FiniteDifferenceAccumulator acc(g, eps);
    REQUIRE(acc.epsilons().size() == 2);
    CHECK(acc.epsilons()[0] == doctest::Approx(0.3));
    CHECK(acc.epsilons()[1] == doctest::Approx(0.1));
    const std::vector<double> tiny = {0.01, 0.02};
    CHECK_THROWS_AS(FiniteDifferenceAccumulator(g, tiny), ConfigError);
    const std::vector<double> big = {1.5};
    CHECK_THROWS_AS(FiniteDifferenceAccumulator(g, big), ConfigError);
}

TEST_CASE("driver expectation on a known Z table") {
    const TimeGrid g(1.0, 10);
    SolutionSample s;
    s.rho = PathTable(4, g.size());
    s.z = PathTable(4, g.size());
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < g.size(); ++k) s.z(i, k) = static_cast<double>(i + 1);
    const auto g_lin = drivers::linear_brownian(0.1, 0.2);
    const auto r = rate_driver_expectation(g_lin, s, g, 3);
    // -g = (mu/sigma) z, mean z = 2.5
    CHECK(r.value == doctest::Approx(0.5 * 2.5));
    CHECK(r.std_error == doctest::Approx(0.5 * std::sqrt(5.0 / 3.0 / 4.0)));
    const auto zero = rate_driver_expectation(drivers::zero(), s, g, 3);
    CHECK(zero.value == 0.0);
    CHECK(zero.std_error == 0.0);
}

TEST_CASE("jump-aware drivers read the jump at the right limit of a stopping time") {
    const TimeGrid g(1.0, 4);
    SolutionSample s;
    s.z_dim = 0;
    s.rho = PathTable(1, g.size());
    s.z = PathTable(1, 0);
    s.u = PathTable(1, g.size());
    for (std::size_t k = 0; k < g.size(); ++k) s.u(0, k) = static_cast<double>(k);
    StoppingSample tau;
    tau.tau = {0.25};
    tau.hit = {1};
    tau.hit_index = {1};
    const auto d = drivers::entropic_jump(1.0, 2.0);
    const auto r = rate_driver_expectation(d, s, g, tau);
    CHECK(r.value == doctest::Approx(-2.0 * (std::exp(2.0) - 2.0 - 1.0)));
    // deterministic time: no shift
    const auto det = rate_driver_expectation(d, s, g, 1);
    CHECK(det.value == doctest::Approx(-2.0 * (std::exp(1.0) - 1.0 - 1.0)));
}

TEST_CASE("no hits is an estimation error, not a number") {
    const TimeGrid g(1.0, 10);
    const auto s = quadratic_paths(g, 3);
    const auto tau = first_hitting(s.rho, g, 100.0, Direction::at_or_above);
    CHECK_THROWS_AS(rate_driver_expectation(drivers::zero(), s, g, tau), EstimationError);
    CHECK_THROWS_AS(rate_finite_difference(s.rho, g, tau, default_epsilons(g)), EstimationError);
}

TEST_CASE("block accumulation equals one pass") {
    const TimeGrid g(1.0, 50);
    const auto noise = sample_noise(g, 3000, 1, 0.0, 4);
    const auto w = simulate_brownian(g, 0.0, 1.0, noise);
    SolutionSample all;
    all.rho = w.values;
    all.z = PathTable(3000, g.size(), 1.0);
    const auto tau = first_hitting(all.rho, g, 0.5, Direction::at_or_above);
    const auto d = drivers::entropic_brownian(2.0);
    const auto eps = default_epsilons(g);
    const auto one_fd = rate_finite_difference(all.rho, g, tau, eps);
    const auto one_drv = rate_driver_expectation(d, all, g, tau);

    DriverExpectationAccumulator acc_d;
    FiniteDifferenceAccumulator acc_f(g, eps);
    for (std::size_t first = 0; first < 3000; first += 1000) {
        const auto part = sample_noise(g, 1000, 1, 0.0, 4, first);
        SolutionSample s;
        s.rho = simulate_brownian(g, 0.0, 1.0, part).values;
        s.z = PathTable(1000, g.size(), 1.0);
        const auto t = first_hitting(s.rho, g, 0.5, Direction::at_or_above);
        acc_d.add(d, s, g, t);
        acc_f.add(s.rho, t);
    }
    CHECK(acc_f.result().value == doctest::Approx(one_fd.value).epsilon(1e-12));
    CHECK(acc_f.result().std_error == doctest::Approx(one_fd.std_error).epsilon(1e-10));
    CHECK(acc_d.result().value == doctest::Approx(one_drv.value).epsilon(1e-12));
    CHECK(acc_f.result().hit_probability == doctest::Approx(tau.hit_probability()));
    // rate of W under the entropic driver is -gamma/2
    CHECK(one_drv.value == doctest::Approx(-1.0));
}

TEST_CASE("agreement helper") {
    RateEstimate a, b;
    a.value = 1.0;
    a.std_error = 0.1;
    b.value = 1.5;
    b.std_error = 0.1;
    CHECK(agree(a, b));
    b.value = 2.0;
    CHECK_FALSE(agree(a, b));
    CHECK(agree(RateEstimate::exact(1.0), RateEstimate::exact(1.0)));
}

TEST_CASE("conditional rate falls back on a constant state") {
    const TimeGrid g(1.0, 20);
    const auto noise = sample_noise(g, 2000, 1, 0.0, 6);
    const auto w = simulate_brownian(g, 0.0, 1.0, noise);
    SolutionSample s;
    s.rho = w.values;
    s.z = PathTable(2000, g.size(), 0.3);
    const auto tau = first_hitting(s.rho, g, 0.3, Direction::at_or_above);
    const auto sigma = StoppingSample::at_index(g, 2000, 0);
    const std::vector<double> state(2000, 0.0);
    const auto r = rate_conditional(drivers::entropic_brownian(1.0), s, g, tau, sigma, state);
    CHECK(r.fallback);
    CHECK(r.aggregate.value == doctest::Approx(-0.045).epsilon(1e-10));
}
