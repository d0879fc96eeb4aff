#include "reslab/driver.hpp"

#include <cmath>

#include "reslab/errors.hpp"
#include "reslab/rng.hpp"

namespace reslab {

namespace {

double norm2(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return s;
}

double first(std::span<const double> z) { return z.empty() ? 0.0 : z[0]; }

}  // namespace

namespace drivers {

Driver zero() {
    DriverFlags f;
    f.y_independent = true;
    f.positively_homogeneous = true;
    f.convex_in_y = true;
    f.nondecreasing_in_y = true;
    return Driver("zero", [](const DriverArgs&) { return 0.0; }, f);
}

Driver linear_brownian(double mu, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("linear driver needs sigma > 0");
    const double theta = mu / sigma;
    DriverFlags f;
    f.y_independent = true;
    f.positively_homogeneous = true;
    f.convex_in_y = true;
    f.nondecreasing_in_y = true;
    return Driver("linear_brownian", [theta](const DriverArgs& a) { return -theta * first(a.z); }, f);
}

Driver bond() {
    DriverFlags f;
    f.positively_homogeneous = true;
    f.convex_in_y = true;
    return Driver("bond", [](const DriverArgs& a) { return -a.x * a.y; }, f);
}

Driver ambiguous_rates(std::function<double(double)> lower, std::function<double(double)> upper) {
    DriverFlags f;
    f.positively_homogeneous = true;
    f.convex_in_y = true;
    return Driver(
        "ambiguous_rates",
        [lower = std::move(lower), upper = std::move(upper)](const DriverArgs& a) {
            const double pos = std::max(a.y, 0.0);
            const double neg = std::max(-a.y, 0.0);
            return -(lower(a.t) * pos - upper(a.t) * neg);
        },
        f);
}

Driver entropic_brownian(double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("entropic gamma must be positive");
    DriverFlags f;
    f.y_independent = true;
    f.convex_in_y = true;
    f.nondecreasing_in_y = true;
    f.growth = GrowthClass::quadratic;
    return Driver("entropic_brownian",
                  [gamma](const DriverArgs& a) { return 0.5 * gamma * norm2(a.z); }, f);
}

Driver entropic_jump(double gamma, double jump_rate) {
    if (!(gamma > 0.0)) throw ConfigError("entropic gamma must be positive");
    if (!(jump_rate >= 0.0)) throw ConfigError("jump rate must be non-negative");
    DriverFlags f;
    f.y_independent = true;
    f.convex_in_y = true;
    f.nondecreasing_in_y = true;
    f.jump_aware = true;
    f.growth = GrowthClass::quadratic;
    return Driver(
        "entropic_jump",
        [gamma, jump_rate](const DriverArgs& a) {
            const double gu = gamma * a.u;
            return 0.5 * gamma * norm2(a.z) + jump_rate / gamma * (std::expm1(gu) - gu);
        },
        f);
}

Driver jump_market_linear(double mu, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("linear driver needs sigma > 0");
    const double theta = mu / sigma;
    DriverFlags f;
    f.y_independent = true;
    f.positively_homogeneous = true;
    f.convex_in_y = true;
    f.nondecreasing_in_y = true;
    f.jump_aware = true;
    return Driver("jump_market_linear",
                  [theta](const DriverArgs& a) { return -theta * first(a.z); }, f);
}

Driver linear_in_y(double kappa) {
    DriverFlags f;
    f.positively_homogeneous = true;
    f.convex_in_y = true;
    f.nondecreasing_in_y = kappa >= 0.0;
    return Driver("linear_in_y", [kappa](const DriverArgs& a) { return kappa * a.y; }, f);
}

Driver positive_part() {
    DriverFlags f;
    f.positively_homogeneous = true;
    f.convex_in_y = true;
    f.nondecreasing_in_y = true;
    return Driver("positive_part", [](const DriverArgs& a) { return std::max(a.y, 0.0); }, f);
}

}  // namespace drivers

std::vector<Driver> builtin_drivers(const CatalogParams& p) {
    return {
        drivers::zero(),
        drivers::linear_brownian(p.mu, p.sigma),
        drivers::bond(),
        drivers::ambiguous_rates([r = p.lower_rate](double) { return r; },
                                 [R = p.upper_rate](double) { return R; }),
        drivers::entropic_brownian(p.gamma),
        drivers::entropic_jump(p.gamma, p.jump_rate),
        drivers::jump_market_linear(p.mu, p.sigma),
    };
}

std::vector<std::string> check_driver_flags(const Driver& driver, unsigned probes) {
    PathStream rng(0x5eed, 0, StreamTag::auxiliary);
    const auto& f = driver.flags();
    bool y_indep = true, homog = true, convex = true, monotone = true;
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b));
    };
    for (unsigned i = 0; i < probes; ++i) {
        const double t = rng.uniform();
        const double x = 0.05 * rng.normal();
        const double y1 = 3.0 * rng.normal();
        const double y2 = 3.0 * rng.normal();
        const double zv = rng.normal();
        const double u = 0.5 * rng.normal();
        const double z[1] = {zv};
        const double g1 = driver.evaluate(t, x, y1, z, u);
        const double g2 = driver.evaluate(t, x, y2, z, u);
        if (f.y_independent && !close(g1, g2)) y_indep = false;

        const double alpha = 0.5 + 2.0 * rng.uniform();
        const double za[1] = {alpha * zv};
        if (f.positively_homogeneous &&
            !close(driver.evaluate(t, x, alpha * y1, za, alpha * u), alpha * g1)) {
            homog = false;
        }
        const double lam = rng.uniform();
        const double gm = driver.evaluate(t, x, lam * y1 + (1.0 - lam) * y2, z, u);
        if (f.convex_in_y && gm > lam * g1 + (1.0 - lam) * g2 + 1e-9 * (1.0 + std::abs(gm))) {
            convex = false;
        }
        if (f.nondecreasing_in_y && ((y1 <= y2 && g1 > g2 + 1e-12) || (y2 <= y1 && g2 > g1 + 1e-12))) {
            monotone = false;
        }
    }
    std::vector<std::string> violations;
    if (!y_indep) violations.emplace_back("y_independent");
    if (!homog) violations.emplace_back("positively_homogeneous");
    if (!convex) violations.emplace_back("convex_in_y");
    if (!monotone) violations.emplace_back("nondecreasing_in_y");
    return violations;
}

}  // namespace reslab
