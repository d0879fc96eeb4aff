#include "reslab/noise.hpp"

#include <cmath>

#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"
#include "reslab/rng.hpp"

namespace reslab {

NoiseBundle::NoiseBundle(TimeGrid grid, std::size_t n_paths, std::size_t dim, double jump_rate,
                         std::uint64_t seed, std::size_t first_path,
                         std::vector<double> increments, std::vector<std::uint32_t> counts)
    : grid_(grid),
      n_paths_(n_paths),
      dim_(dim),
      jump_rate_(jump_rate),
      seed_(seed),
      first_path_(first_path),
      increments_(std::move(increments)),
      counts_(std::move(counts)) {
    if (increments_.size() != n_paths_ * grid_.n_steps() * dim_) {
        throw ConfigError("noise bundle: increment array has the wrong size");
    }
    if (!counts_.empty() && counts_.size() != n_paths_ * grid_.n_steps()) {
        throw ConfigError("noise bundle: count array has the wrong size");
    }
}

NoiseBundle sample_noise(const TimeGrid& grid, std::size_t n_paths, std::size_t brownian_dim,
                         double jump_rate, std::uint64_t seed, std::size_t first_path) {
    if (n_paths < 1) throw ConfigError("n_paths must be at least 1");
    if (!(jump_rate >= 0.0) || !std::isfinite(jump_rate)) {
        throw ConfigError("jump_rate must be a finite non-negative number");
    }
    const std::size_t steps = grid.n_steps();
    const double sd = std::sqrt(grid.dt());
    const double mean_count = jump_rate * grid.dt();

    std::vector<double> dw(n_paths * steps * brownian_dim);
    std::vector<std::uint32_t> counts;
    if (jump_rate > 0.0) counts.resize(n_paths * steps);

    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t id = first_path + i;
            if (brownian_dim > 0) {
                PathStream gauss(seed, id, StreamTag::brownian);
                double* out = dw.data() + i * steps * brownian_dim;
                for (std::size_t j = 0; j < steps * brownian_dim; ++j) out[j] = sd * gauss.normal();
            }
            if (jump_rate > 0.0) {
                PathStream jumps(seed, id, StreamTag::poisson);
                std::uint32_t* out = counts.data() + i * steps;
                for (std::size_t j = 0; j < steps; ++j) out[j] = jumps.poisson(mean_count);
            }
        }
    });
    return NoiseBundle(grid, n_paths, brownian_dim, jump_rate, seed, first_path, std::move(dw),
                       std::move(counts));
}

}  // namespace reslab
