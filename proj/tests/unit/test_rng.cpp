#include <doctest.h>

#include <cmath>

#include "reslab/errors.hpp"
#include "reslab/rng.hpp"
#include "reslab/stats.hpp"

using namespace reslab;

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("path streams are pure functions of seed, path and tag") {
    PathStream a(7, 12, StreamTag::brownian), b(7, 12, StreamTag::brownian);
    PathStream other_path(7, 13, StreamTag::brownian), other_tag(7, 12, StreamTag::poisson);
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        CHECK(x != other_path.normal());
        CHECK(x != other_tag.normal());
    }
}

TEST_CASE("uniform stays in the open unit interval") {
    PathStream s(1, 0, StreamTag::auxiliary);
    SampleMoments m;
    for (int i = 0; i < 200000; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        m.add(u);
    }
    CHECK(std::abs(m.mean - 0.5) < 4 * m.std_error());
    CHECK(std::abs(m.variance() - 1.0 / 12) < 2e-3);
}

TEST_CASE("normal moments") {
    PathStream s(3, 5, StreamTag::brownian);
    SampleMoments m, m4;
    for (int i = 0; i < 200000; ++i) {
        const double z = s.normal();
        m.add(z);
        m4.add(z * z * z * z);
    }
    CHECK(std::abs(m.mean) < 4 * m.std_error());
    CHECK(std::abs(m.variance() - 1.0) < 0.01);
    CHECK(std::abs(m4.mean - 3.0) < 4 * m4.std_error());
}

TEST_CASE("poisson inversion matches its mean and variance") {
    PathStream s(9, 1, StreamTag::poisson);
    for (double mean : {0.004, 0.7, 12.0}) {
        SampleMoments m;
        for (int i = 0; i < 100000; ++i) m.add(s.poisson(mean));
        CHECK(std::abs(m.mean - mean) < 4 * std::sqrt(mean / 1e5));
        CHECK(std::abs(m.variance() - mean) < 0.05 * mean + 1e-3);
    }
    CHECK(s.poisson(0.0) == 0);
    CHECK_THROWS(s.poisson(-1.0));
}
