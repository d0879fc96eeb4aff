#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "reslab/grid.hpp"

namespace reslab {

// Driving noise for a block of paths. Path ids run from first_path() to
// first_path() + n_paths() - 1; the draws of a path depend only on
// (seed, path id), so blocks can be generated independently and merged.
class NoiseBundle {
public:
    NoiseBundle(TimeGrid grid, std::size_t n_paths, std::size_t dim, double jump_rate,
                std::uint64_t seed, std::size_t first_path, std::vector<double> increments,
                std::vector<std::uint32_t> counts);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t n_paths() const noexcept { return n_paths_; }
    std::size_t dim() const noexcept { return dim_; }
    double jump_rate() const noexcept { return jump_rate_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t first_path() const noexcept { return first_path_; }

    double increment(std::size_t path, std::size_t step, std::size_t d = 0) const noexcept {
        return increments_[(path * grid_.n_steps() + step) * dim_ + d];
    }
    std::uint32_t count(std::size_t path, std::size_t step) const noexcept {
        return counts_.empty() ? 0u : counts_[path * grid_.n_steps() + step];
    }
    std::span<const double> increments() const noexcept { return increments_; }

    bool operator==(const NoiseBundle&) const = default;

private:
    TimeGrid grid_;
    std::size_t n_paths_;
    std::size_t dim_;
    double jump_rate_;
    std::uint64_t seed_;
    std::size_t first_path_;
    std::vector<double> increments_;
    std::vector<std::uint32_t> counts_;  // empty when jump_rate == 0
};

NoiseBundle sample_noise(const TimeGrid& grid, std::size_t n_paths, std::size_t brownian_dim,
                         double jump_rate, std::uint64_t seed, std::size_t first_path = 0);

}  // namespace reslab
