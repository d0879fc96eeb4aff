#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "reslab/grid.hpp"
#include "reslab/paths.hpp"

namespace reslab {

enum class Direction { at_or_above, at_or_below };

// Per-path stopping time on the grid. hit[i] means tau[i] < T.
struct StoppingSample {
    static constexpr std::size_t no_hit = std::numeric_limits<std::size_t>::max();

    std::vector<double> tau;
    std::vector<std::uint8_t> hit;
    std::vector<std::size_t> hit_index;  // no_hit when !hit
    // True for a deterministic time presented as a stopping time.
    bool deterministic = false;

    std::size_t size() const noexcept { return tau.size(); }
    std::size_t hit_count() const noexcept;
    double hit_probability() const noexcept;

    // Every path "stops" at grid index k (k < n_steps).
    static StoppingSample at_index(const TimeGrid& grid, std::size_t n_paths, std::size_t k);
};

StoppingSample first_hitting(const PathTable& process, const TimeGrid& grid, double threshold,
                             Direction direction);

}  // namespace reslab
