#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "reslab/driver.hpp"
#include "reslab/grid.hpp"
#include "reslab/hitting.hpp"
#include "reslab/paths.hpp"
#include "reslab/stats.hpp"

namespace reslab {

// Per-path (rho, Z, U) on the grid plus the forward state fed to the driver.
struct SolutionSample {
    PathTable rho;
    PathTable z;      // n_points * z_dim columns, point-major
    PathTable u;      // empty unless the model has jumps
    PathTable state;  // empty if the driver does not read the state
    std::size_t z_dim = 1;

    std::size_t n_paths() const noexcept { return rho.n_paths(); }
    std::span<const double> z_at(std::size_t path, std::size_t k) const noexcept {
        return z.row(path).subspan(k * z_dim, z_dim);
    }
    double u_at(std::size_t path, std::size_t k) const noexcept {
        return u.empty() ? 0.0 : u(path, k);
    }
    double state_at(std::size_t path, std::size_t k) const noexcept {
        return state.empty() ? 0.0 : state(path, k);
    }
};

enum class RateMethod { finite_difference, driver_expectation, closed_form };
std::string_view to_string(RateMethod method) noexcept;

struct ExtrapolationDiag {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> differences;  // D(eps) per epsilon
    std::vector<double> difference_se;
};

struct RateEstimate {
    double value = 0.0;
    double std_error = 0.0;
    RateMethod method = RateMethod::closed_form;
    std::vector<double> epsilons;  // finite differences only, strictly decreasing
    ExtrapolationDiag diag;
    std::size_t samples = 0;
    double hit_probability = 1.0;
    std::optional<double> time;  // set for deterministic evaluation times

    static RateEstimate exact(double value, std::optional<double> t = std::nullopt);
};

// |a - b| <= k * combined SE.
bool agree(const RateEstimate& a, const RateEstimate& b, double k = 4.0) noexcept;

// -mean g over paths (hit paths for stopping times). Throws EstimationError
// when no path hits.
RateEstimate rate_driver_expectation(const Driver& driver, const SolutionSample& solution,
                                     const TimeGrid& grid, const StoppingSample& stopping);
RateEstimate rate_driver_expectation(const Driver& driver, const SolutionSample& solution,
                                     const TimeGrid& grid, std::size_t t_index);

// Default epsilon schedule {8, 4, 2, 1} * dt.
std::vector<double> default_epsilons(const TimeGrid& grid);

RateEstimate rate_finite_difference(const PathTable& risk_paths, const TimeGrid& grid,
                                    const StoppingSample& stopping,
                                    std::span<const double> epsilons);
RateEstimate rate_finite_difference(const PathTable& risk_paths, const TimeGrid& grid,
                                    std::size_t t_index, std::span<const double> epsilons);

// Accumulators let callers process paths block by block (fixed merge order)
// and still obtain the same estimator as a single pass.
class DriverExpectationAccumulator {
public:
    void add(const Driver& driver, const SolutionSample& solution, const TimeGrid& grid,
             const StoppingSample& stopping);
    // Per-path contributions already computed by the caller (-g values of hit paths).
    void add_values(std::span<const double> contributions, std::size_t total_paths);
    RateEstimate result() const;
    std::size_t total_paths() const noexcept { return total_; }

private:
    SampleMoments moments_;
    std::size_t total_ = 0;
    std::optional<double> time_;
    bool deterministic_ = true;
};

class FiniteDifferenceAccumulator {
public:
    FiniteDifferenceAccumulator(const TimeGrid& grid, std::span<const double> epsilons);
    void add(const PathTable& risk_paths, const StoppingSample& stopping);
    RateEstimate result() const;
    const std::vector<double>& epsilons() const noexcept { return epsilons_; }

private:
    TimeGrid grid_;
    std::vector<double> epsilons_;
    std::vector<std::size_t> offsets_;
    std::vector<double> intercept_weights_;
    std::vector<double> slope_weights_;
    std::vector<SampleMoments> per_epsilon_;
    SampleMoments intercept_;
    SampleMoments slope_;
    std::size_t total_ = 0;
    std::optional<double> time_;
    bool deterministic_ = true;
};

struct ConditionalRate {
    std::vector<double> per_path;
    RateEstimate aggregate;
    bool fallback = false;  // degenerate basis: unconditional value everywhere
};

// Regression of 1{tau<T} * (-g at the right limit) on monomials of the state at
// sigma, divided by the hit probability.
ConditionalRate rate_conditional(const Driver& driver, const SolutionSample& solution,
                                 const TimeGrid& grid, const StoppingSample& tau,
                                 const StoppingSample& sigma,
                                 std::span<const double> conditioning_state, int degree = 4);

}  // namespace reslab
