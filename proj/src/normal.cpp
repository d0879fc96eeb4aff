#include "reslab/normal.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "reslab/errors.hpp"

namespace reslab {

double norm_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile needs p in (0, 1)");
    if (p > 0.5) return -norm_quantile(1.0 - p);
    if (p == 0.5) return 0.0;
    // Lower tail: solve norm_cdf(x) = p on a bracket that always contains the root.
    auto f = [p](double x) { return norm_cdf(x) - p; };
    double lo = -1.0;
    while (f(lo) > 0.0) lo *= 2.0;
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, lo, 0.0, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (a + b);
}

}  // namespace reslab
