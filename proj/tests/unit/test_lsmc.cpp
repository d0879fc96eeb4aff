#include <doctest.h>

#include <cmath>

#include "reslab/closed_forms.hpp"
#include "reslab/driver.hpp"
#include "reslab/errors.hpp"
#include "reslab/lsmc.hpp"
#include "reslab/noise.hpp"
#include "reslab/paths.hpp"
#include "reslab/regression.hpp"

using namespace reslab;

TEST_CASE("projector reproduces polynomials of its degree") {
    std::vector<double> x, y;
    for (int i = 0; i < 200; ++i) {
        const double v = -1.0 + 0.01 * i;
        x.push_back(100 + 10 * v);
        y.push_back(1 - 2 * v + 3 * v * v * v);
    }
    const PolynomialProjector p(x, 3);
    const auto fit = p.project(y);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(fit[i] == doctest::Approx(y[i]).epsilon(1e-8));
    const auto c = p.coefficients(y);
    CHECK(p.predict(c, 105.0) == doctest::Approx(1 - 1 + 3 * 0.125).epsilon(1e-8));
}

TEST_CASE("projector degenerates to the mean on a constant regressor") {
    const std::vector<double> x(50, 2.0);
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) y.push_back(i);
    const PolynomialProjector p(x, 4);
    CHECK(p.degenerate());
    for (double v : p.project(y)) CHECK(v == doctest::Approx(24.5));
}

TEST_CASE("projector rejects a rank-deficient basis") {
    std::vector<double> x;
    for (int i = 0; i < 40; ++i) x.push_back(i % 2);
    CHECK_THROWS_AS(PolynomialProjector(x, 4), OracleError);
}

TEST_CASE("LSMC linear driver prices the put") {
    const BSPutSpec spec{1000, 1000, 0.1, 0.1, 1.0};
    const TimeGrid g(1.0, 50);
    const auto noise = sample_noise(g, 40000, 1, 0.0, 17);
    const auto s = simulate_gbm(g, spec.s0, spec.mu, spec.sigma, noise);
    std::vector<double> payoff;
    for (std::size_t i = 0; i < s.values.n_paths(); ++i) payoff.push_back(std::max(spec.strike - s.values(i, 50), 0.0));
    LsmcOptions opts;
    opts.transform = BasisTransform::log;
    const auto sol = lsmc_solve(drivers::linear_brownian(spec.mu, spec.sigma), payoff, s, noise, g, opts);
    const double exact = bs_put_price(spec, 0.0, spec.s0);
    CHECK(std::abs(sol.initial_value - exact) / exact < 0.02);
    // Z at t = 0 against -sigma S N(-d+)
    const double z0 = -spec.sigma * spec.s0 * bs_put_short_delta(spec, 0.0, spec.s0);
    CHECK(sol.sample.z_at(0, 0)[0] == doctest::Approx(z0).epsilon(0.05));
}

TEST_CASE("LSMC rejects jump-aware drivers and mismatched payoffs") {
    const TimeGrid g(1.0, 10);
    const auto noise = sample_noise(g, 100, 1, 0.0, 1);
    const auto s = simulate_gbm(g, 1.0, 0.0, 0.2, noise);
    const std::vector<double> payoff(100, 1.0), short_payoff(99, 1.0);
    CHECK_THROWS_AS(lsmc_solve(drivers::entropic_jump(1.0, 1.0), payoff, s, noise, g), ConfigError);
    CHECK_THROWS_AS(lsmc_solve(drivers::zero(), short_payoff, s, noise, g), ConfigError);
    // constant payoff under the zero driver stays constant
    const auto sol = lsmc_solve(drivers::zero(), payoff, s, noise, g);
    CHECK(sol.initial_value == doctest::Approx(1.0).epsilon(1e-12));
}
