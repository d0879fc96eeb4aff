#include "reslab/paths.hpp"

#include <cmath>

#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"

namespace reslab {

std::vector<double> PathTable::column(std::size_t k) const {
    std::vector<double> out(n_paths_);
    for (std::size_t i = 0; i < n_paths_; ++i) out[i] = (*this)(i, k);
    return out;
}

namespace {

void require_matching(const TimeGrid& grid, const NoiseBundle& noise, bool brownian) {
    if (!(noise.grid() == grid)) throw ConfigError("noise was sampled on a different grid");
    if (brownian && noise.dim() < 1) throw ConfigError("model needs a Brownian dimension");
}

}  // namespace

StatePaths simulate_gbm(const TimeGrid& grid, double s0, double mu, double sigma,
                        const NoiseBundle& noise) {
    return simulate_jump_gbm(grid, s0, mu, sigma, 0.0, noise);
}

StatePaths simulate_jump_gbm(const TimeGrid& grid, double s0, double mu, double sigma,
                             double gamma, const NoiseBundle& noise) {
    if (!(s0 > 0.0)) throw ConfigError("s0 must be positive");
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
    if (!(gamma > -1.0)) throw ConfigError("jump multiplier gamma must exceed -1");
    require_matching(grid, noise, true);

    const std::size_t n = noise.n_paths();
    const std::size_t steps = grid.n_steps();
    const double drift = (mu - 0.5 * sigma * sigma) * grid.dt();
    const double log_jump = std::log1p(gamma);
    const bool jumps = gamma != 0.0;

    StatePaths out{PathTable(n, steps + 1), jumps ? ModelTag::jump_gbm : ModelTag::gbm};
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto row = out.values.row(i);
            double log_s = std::log(s0);
            row[0] = s0;
            for (std::size_t k = 0; k < steps; ++k) {
                log_s += drift + sigma * noise.increment(i, k);
                if (jumps) log_s += log_jump * noise.count(i, k);
                row[k + 1] = std::exp(log_s);
            }
        }
    });
    return out;
}

StatePaths simulate_vasicek(const TimeGrid& grid, double r0, double a, double b, double sigma,
                            const NoiseBundle& noise) {
    if (!(a > 0.0)) throw ConfigError("mean-reversion speed a must be positive");
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
    require_matching(grid, noise, true);

    const std::size_t n = noise.n_paths();
    const std::size_t steps = grid.n_steps();
    const double decay = std::exp(-a * grid.dt());
    const double sd = sigma * std::sqrt(-std::expm1(-2.0 * a * grid.dt()) / (2.0 * a));
    // increments are N(0, dt); rescale to N(0, 1) before applying the exact law
    const double unit = 1.0 / std::sqrt(grid.dt());

    StatePaths out{PathTable(n, steps + 1), ModelTag::vasicek};
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto row = out.values.row(i);
            row[0] = r0;
            for (std::size_t k = 0; k < steps; ++k) {
                row[k + 1] = row[k] * decay + b * (1.0 - decay) + sd * unit * noise.increment(i, k);
            }
        }
    });
    return out;
}

StatePaths simulate_brownian(const TimeGrid& grid, double x0, double scale,
                             const NoiseBundle& noise) {
    require_matching(grid, noise, true);
    const std::size_t n = noise.n_paths();
    const std::size_t steps = grid.n_steps();
    StatePaths out{PathTable(n, steps + 1), ModelTag::brownian_arith};
    for (std::size_t i = 0; i < n; ++i) {
        auto row = out.values.row(i);
        double w = 0.0;
        row[0] = x0;
        for (std::size_t k = 0; k < steps; ++k) {
            w += noise.increment(i, k);
            row[k + 1] = x0 + scale * w;
        }
    }
    return out;
}

PathTable cumulative_counts(const NoiseBundle& noise) {
    const std::size_t steps = noise.grid().n_steps();
    PathTable out(noise.n_paths(), steps + 1);
    for (std::size_t i = 0; i < noise.n_paths(); ++i) {
        double total = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            total += noise.count(i, k);
            out(i, k + 1) = total;
        }
    }
    return out;
}

}  // namespace reslab
