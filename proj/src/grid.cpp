#include "reslab/grid.hpp"

#include <cmath>

#include "reslab/errors.hpp"

namespace reslab {

TimeGrid::TimeGrid(double horizon, std::size_t n_steps)
    : horizon_(horizon), n_steps_(n_steps), dt_(horizon / static_cast<double>(n_steps)) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon T must be positive");
    if (n_steps == 0) throw ConfigError("n_steps must be at least 1");
}

double TimeGrid::time(std::size_t k) const noexcept {
    if (k >= n_steps_) return horizon_;
    return static_cast<double>(k) * dt_;
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = time(k);
    return out;
}

std::size_t TimeGrid::nearest_index(double t) const {
    if (!(t >= 0.0 && t <= horizon_ * (1.0 + 1e-12))) throw DomainError("time outside [0, T]");
    const double k = std::round(t / dt_ - 1e-9);
    return std::min(static_cast<std::size_t>(std::max(k, 0.0)), n_steps_);
}

TimeGrid make_time_grid(double horizon, long long n_steps) {
    if (n_steps < 1) throw ConfigError("n_steps must be at least 1");
    return TimeGrid(horizon, static_cast<std::size_t>(n_steps));
}

}  // namespace reslab
