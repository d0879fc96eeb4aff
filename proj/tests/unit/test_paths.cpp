#include <doctest.h>

#include <cmath>

#include "reslab/errors.hpp"
#include "reslab/grid.hpp"
#include "reslab/hitting.hpp"
#include "reslab/noise.hpp"
#include "reslab/paths.hpp"
#include "reslab/stats.hpp"

using namespace reslab;

TEST_CASE("time grid") {
    const TimeGrid g(1.0, 252);
    CHECK(g.size() == 253);
    CHECK(g.dt() == doctest::Approx(1.0 / 252).epsilon(1e-15));
    CHECK(g.time(252) == 1.0);
    CHECK(g.nearest_index(0.5) == 126);
    CHECK_THROWS_AS(TimeGrid(0.0, 10), ConfigError);
    CHECK_THROWS_AS(TimeGrid(-1.0, 10), ConfigError);
    CHECK_THROWS_AS(TimeGrid(1.0, 0), ConfigError);
    CHECK_THROWS_AS(make_time_grid(1.0, -3), ConfigError);
    CHECK(make_time_grid(2.0, 10).dt() == doctest::Approx(0.2));
}

TEST_CASE("noise blocks do not depend on how paths are split") {
    const TimeGrid g(1.0, 20);
    const auto whole = sample_noise(g, 10, 2, 1.5, 42);
    const auto tail = sample_noise(g, 4, 2, 1.5, 42, 6);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < 20; ++k) {
            for (std::size_t d = 0; d < 2; ++d) CHECK(whole.increment(6 + i, k, d) == tail.increment(i, k, d));
            CHECK(whole.count(6 + i, k) == tail.count(i, k));
        }
    }
}

TEST_CASE("driftless exponential is a martingale") {
    const TimeGrid g(1.0, 50);
    const auto noise = sample_noise(g, 50000, 1, 0.0, 11);
    const auto s = simulate_gbm(g, 1.0, 0.0, 0.2, noise);
    const auto m = moments_of(s.values.column(50));
    CHECK(std::abs(m.mean - 1.0) < 4 * m.std_error());
    CHECK(s.model == ModelTag::gbm);
}

TEST_CASE("vasicek terminal mean") {
    const TimeGrid g(1.0, 252);
    const auto noise = sample_noise(g, 40000, 1, 0.0, 5);
    const auto r = simulate_vasicek(g, 0.02, 1.0, 0.02, 0.01, noise);
    const auto m = moments_of(r.values.column(252));
    CHECK(std::abs(m.mean - 0.02) < 4 * m.std_error());
    // exact-transition scheme: variance sigma^2 (1 - e^{-2a}) / (2a)
    CHECK(m.variance() == doctest::Approx(1e-4 * (1 - std::exp(-2.0)) / 2).epsilon(0.03));
    CHECK_THROWS_AS(simulate_vasicek(g, 0.02, 0.0, 0.02, 0.01, noise), ConfigError);
}

TEST_CASE("jump GBM mean grows at mu + jump_rate * gamma") {
    const TimeGrid g(1.0, 50);
    const auto noise = sample_noise(g, 60000, 1, 1.0, 8);
    const auto s = simulate_jump_gbm(g, 1.0, 0.05, 0.2, -0.1, noise);
    const auto m = moments_of(s.values.column(50));
    CHECK(std::abs(m.mean - std::exp(0.05 - 0.1)) < 4 * m.std_error());
    CHECK_THROWS_AS(simulate_jump_gbm(g, 1.0, 0.05, 0.2, -1.0, noise), ConfigError);
    const auto n = cumulative_counts(noise);
    const auto mc = moments_of(n.column(50));
    CHECK(std::abs(mc.mean - 1.0) < 4 * mc.std_error());
}

TEST_CASE("first hitting on a hand-made table") {
    const TimeGrid g(1.0, 4);
    PathTable p(3, 5);
    const double rows[3][5] = {{0, 1, 3, 1, 5}, {0, 0, 0, 0, 9}, {2, 0, 0, 0, 0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 5; ++k) p(i, k) = rows[i][k];
    const auto s = first_hitting(p, g, 2.0, Direction::at_or_above);
    CHECK(s.hit[0] == 1);
    CHECK(s.hit_index[0] == 2);
    CHECK(s.tau[0] == doctest::Approx(0.5));
    // reaching the level only at T is not a hit
    CHECK(s.hit[1] == 0);
    CHECK(s.tau[1] == 1.0);
    CHECK(s.hit_index[1] == StoppingSample::no_hit);
    CHECK(s.hit_index[2] == 0);
    CHECK(s.hit_count() == 2);
    CHECK(s.hit_probability() == doctest::Approx(2.0 / 3));
    const auto below = first_hitting(p, g, 0.0, Direction::at_or_below);
    CHECK(below.hit_index[2] == 1);

    const auto at = StoppingSample::at_index(g, 3, 1);
    CHECK(at.deterministic);
    CHECK(at.hit_probability() == 1.0);
    CHECK_THROWS(StoppingSample::at_index(g, 3, 4));
}
