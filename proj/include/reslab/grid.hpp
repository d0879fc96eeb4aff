#pragma once

#include <cstddef>
#include <vector>

namespace reslab {

// Uniform partition of [0, T] into n_steps intervals.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t n_steps);

    double horizon() const noexcept { return horizon_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t size() const noexcept { return n_steps_ + 1; }
    double dt() const noexcept { return dt_; }
    double time(std::size_t k) const noexcept;
    std::vector<double> times() const;
    // Grid index closest to t (ties go to the earlier point).
    std::size_t nearest_index(double t) const;

    bool operator==(const TimeGrid&) const = default;

private:
    double horizon_;
    std::size_t n_steps_;
    double dt_;
};

TimeGrid make_time_grid(double horizon, long long n_steps);

}  // namespace reslab
