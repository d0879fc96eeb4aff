#include "reslab/hitting.hpp"

#include "reslab/errors.hpp"

namespace reslab {

std::size_t StoppingSample::hit_count() const noexcept {
    std::size_t c = 0;
    for (auto h : hit) c += h;
    return c;
}

double StoppingSample::hit_probability() const noexcept {
    return hit.empty() ? 0.0 : static_cast<double>(hit_count()) / static_cast<double>(hit.size());
}

StoppingSample StoppingSample::at_index(const TimeGrid& grid, std::size_t n_paths, std::size_t k) {
    if (k >= grid.n_steps()) throw DomainError("deterministic evaluation time must be before T");
    StoppingSample s;
    s.tau.assign(n_paths, grid.time(k));
    s.hit.assign(n_paths, 1);
    s.hit_index.assign(n_paths, k);
    s.deterministic = true;
    return s;
}

StoppingSample first_hitting(const PathTable& process, const TimeGrid& grid, double threshold,
                             Direction direction) {
    if (process.n_paths() == 0) throw ConfigError("first_hitting: empty path ensemble");
    if (process.n_points() != grid.size()) {
        throw ConfigError("first_hitting: process must be defined on the full grid");
    }
    const std::size_t n = process.n_paths();
    StoppingSample s;
    s.tau.assign(n, grid.horizon());
    s.hit.assign(n, 0);
    s.hit_index.assign(n, StoppingSample::no_hit);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = process.row(i);
        // tau = T is not a hit, so the terminal point is not scanned
        for (std::size_t k = 0; k < grid.n_steps(); ++k) {
            const bool crossed =
                direction == Direction::at_or_above ? row[k] >= threshold : row[k] <= threshold;
            if (crossed) {
                s.tau[i] = grid.time(k);
                s.hit[i] = 1;
                s.hit_index[i] = k;
                break;
            }
        }
    }
    return s;
}

}  // namespace reslab
