#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "reslab/grid.hpp"
#include "reslab/noise.hpp"

namespace reslab {

// Row-major table of per-path values on the grid points.
class PathTable {
public:
    PathTable() = default;
    PathTable(std::size_t n_paths, std::size_t n_points, double fill = 0.0)
        : n_paths_(n_paths), n_points_(n_points), data_(n_paths * n_points, fill) {}

    std::size_t n_paths() const noexcept { return n_paths_; }
    std::size_t n_points() const noexcept { return n_points_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t path, std::size_t k) noexcept {
        return data_[path * n_points_ + k];
    }
    double operator()(std::size_t path, std::size_t k) const noexcept {
        return data_[path * n_points_ + k];
    }
    std::span<double> row(std::size_t path) noexcept {
        return {data_.data() + path * n_points_, n_points_};
    }
    std::span<const double> row(std::size_t path) const noexcept {
        return {data_.data() + path * n_points_, n_points_};
    }
    std::vector<double> column(std::size_t k) const;
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const PathTable&) const = default;

private:
    std::size_t n_paths_ = 0;
    std::size_t n_points_ = 0;
    std::vector<double> data_;
};

enum class ModelTag { gbm, vasicek, jump_gbm, brownian_arith };

struct StatePaths {
    PathTable values;
    ModelTag model = ModelTag::gbm;

    bool operator==(const StatePaths&) const = default;
};

StatePaths simulate_gbm(const TimeGrid& grid, double s0, double mu, double sigma,
                        const NoiseBundle& noise);
StatePaths simulate_vasicek(const TimeGrid& grid, double r0, double a, double b, double sigma,
                            const NoiseBundle& noise);
StatePaths simulate_jump_gbm(const TimeGrid& grid, double s0, double mu, double sigma,
                             double gamma, const NoiseBundle& noise);
// x0 + scale * W_t.
StatePaths simulate_brownian(const TimeGrid& grid, double x0, double scale,
                             const NoiseBundle& noise);
// Cumulative Poisson counts N_t (as doubles) from the noise bundle.
PathTable cumulative_counts(const NoiseBundle& noise);

}  // namespace reslab
