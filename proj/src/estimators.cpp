#include "reslab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"
#include "reslab/regression.hpp"

namespace reslab {

std::string_view to_string(RateMethod method) noexcept {
    switch (method) {
        case RateMethod::finite_difference: return "finite_difference";
        case RateMethod::driver_expectation: return "driver_expectation";
        case RateMethod::closed_form: return "closed_form";
    }
    return "unknown";
}

RateEstimate RateEstimate::exact(double value, std::optional<double> t) {
    RateEstimate r;
    r.value = value;
    r.method = RateMethod::closed_form;
    r.time = t;
    return r;
}

bool agree(const RateEstimate& a, const RateEstimate& b, double k) noexcept {
    return std::abs(a.value - b.value) <= k * combined_se(a.std_error, b.std_error);
}

namespace {

constexpr const char* kNoHits = "conditional event has empirical probability 0";

void check_shapes(const SolutionSample& solution, const TimeGrid& grid,
                  const StoppingSample& stopping) {
    if (solution.rho.n_points() != grid.size()) {
        throw ConfigError("solution sample is not defined on the full grid");
    }
    if (stopping.size() != solution.n_paths()) {
        throw ConfigError("stopping sample and solution differ in path count");
    }
}

// Grid index where (Z, U) are read: the right limit for jump-aware drivers at
// genuine stopping times.
std::size_t component_index(const Driver& driver, const StoppingSample& stopping, std::size_t k,
                            std::size_t last) {
    if (driver.flags().jump_aware && !stopping.deterministic) return std::min(k + 1, last);
    return k;
}

std::vector<double> driver_contributions(const Driver& driver, const SolutionSample& solution,
                                         const TimeGrid& grid, const StoppingSample& stopping) {
    const std::size_t n = solution.n_paths();
    std::vector<double> values(n, 0.0);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            if (!stopping.hit[i]) continue;
            const std::size_t k = stopping.hit_index[i];
            const std::size_t kc = component_index(driver, stopping, k, grid.n_steps());
            values[i] = -driver(DriverArgs{grid.time(k), solution.state_at(i, k),
                                           solution.rho(i, k), solution.z_at(i, kc),
                                           solution.u_at(i, kc)});
        }
    });
    std::vector<double> hits;
    hits.reserve(stopping.hit_count());
    for (std::size_t i = 0; i < n; ++i) {
        if (stopping.hit[i]) hits.push_back(values[i]);
    }
    return hits;
}

}  // namespace

void DriverExpectationAccumulator::add(const Driver& driver, const SolutionSample& solution,
                                       const TimeGrid& grid, const StoppingSample& stopping) {
    check_shapes(solution, grid, stopping);
    const auto values = driver_contributions(driver, solution, grid, stopping);
    add_values(values, stopping.size());
    if (stopping.deterministic && !stopping.tau.empty()) {
        time_ = stopping.tau.front();
    } else {
        deterministic_ = false;
    }
}

void DriverExpectationAccumulator::add_values(std::span<const double> contributions,
                                              std::size_t total_paths) {
    for (double v : contributions) moments_.add(v);
    total_ += total_paths;
}

RateEstimate DriverExpectationAccumulator::result() const {
    if (moments_.count == 0) throw EstimationError(kNoHits);
    RateEstimate r;
    r.value = moments_.mean;
    r.std_error = moments_.std_error();
    r.method = RateMethod::driver_expectation;
    r.samples = moments_.count;
    r.hit_probability =
        total_ > 0 ? static_cast<double>(moments_.count) / static_cast<double>(total_) : 0.0;
    if (deterministic_) r.time = time_;
    return r;
}

RateEstimate rate_driver_expectation(const Driver& driver, const SolutionSample& solution,
                                     const TimeGrid& grid, const StoppingSample& stopping) {
    DriverExpectationAccumulator acc;
    acc.add(driver, solution, grid, stopping);
    return acc.result();
}

RateEstimate rate_driver_expectation(const Driver& driver, const SolutionSample& solution,
                                     const TimeGrid& grid, std::size_t t_index) {
    return rate_driver_expectation(
        driver, solution, grid, StoppingSample::at_index(grid, solution.n_paths(), t_index));
}

std::vector<double> default_epsilons(const TimeGrid& grid) {
    const double dt = grid.dt();
    return {8.0 * dt, 4.0 * dt, 2.0 * dt, 1.0 * dt};
}

FiniteDifferenceAccumulator::FiniteDifferenceAccumulator(const TimeGrid& grid,
                                                         std::span<const double> epsilons)
    : grid_(grid) {
    // Round each epsilon to a whole number of steps; those below one step are dropped.
    for (double eps : epsilons) {
        if (!(eps > 0.0 && eps < grid.horizon())) {
            throw ConfigError("finite-difference epsilons must lie in (0, T)");
        }
        const double steps = std::round(eps / grid.dt());
        if (steps < 1.0) continue;
        const auto offset = static_cast<std::size_t>(steps);
        if (std::find(offsets_.begin(), offsets_.end(), offset) == offsets_.end()) {
            offsets_.push_back(offset);
        }
    }
    if (offsets_.empty()) {
        throw ConfigError("all finite-difference epsilons are below the grid resolution dt");
    }
    std::sort(offsets_.begin(), offsets_.end(), std::greater<>());
    for (auto o : offsets_) epsilons_.push_back(static_cast<double>(o) * grid.dt());

    const std::size_t m = epsilons_.size();
    intercept_weights_.assign(m, 1.0 / static_cast<double>(m));
    slope_weights_.assign(m, 0.0);
    if (m > 1) {
        const double mean = std::accumulate(epsilons_.begin(), epsilons_.end(), 0.0) / m;
        double sxx = 0.0;
        for (double e : epsilons_) sxx += (e - mean) * (e - mean);
        for (std::size_t j = 0; j < m; ++j) {
            slope_weights_[j] = (epsilons_[j] - mean) / sxx;
            intercept_weights_[j] = 1.0 / m - mean * slope_weights_[j];
        }
    }
    per_epsilon_.resize(m);
}

void FiniteDifferenceAccumulator::add(const PathTable& risk_paths, const StoppingSample& stopping) {
    if (risk_paths.n_points() != grid_.size()) {
        throw ConfigError("risk paths must be defined on the full grid");
    }
    if (stopping.size() != risk_paths.n_paths()) {
        throw ConfigError("stopping sample and risk paths differ in path count");
    }
    const std::size_t last = grid_.n_steps();
    const std::size_t m = epsilons_.size();
    std::vector<double> d(m);
    for (std::size_t i = 0; i < risk_paths.n_paths(); ++i) {
        if (!stopping.hit[i]) continue;
        const std::size_t k = stopping.hit_index[i];
        const auto row = risk_paths.row(i);
        double intercept = 0.0, slope = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            d[j] = (row[std::min(k + offsets_[j], last)] - row[k]) / epsilons_[j];
            per_epsilon_[j].add(d[j]);
            intercept += intercept_weights_[j] * d[j];
            slope += slope_weights_[j] * d[j];
        }
        intercept_.add(intercept);
        slope_.add(slope);
    }
    total_ += stopping.size();
    if (stopping.deterministic && !stopping.tau.empty()) {
        time_ = stopping.tau.front();
    } else {
        deterministic_ = false;
    }
}

RateEstimate FiniteDifferenceAccumulator::result() const {
    if (intercept_.count == 0) throw EstimationError(kNoHits);
    RateEstimate r;
    r.value = intercept_.mean;
    r.std_error = intercept_.std_error();
    r.method = RateMethod::finite_difference;
    r.epsilons = epsilons_;
    r.samples = intercept_.count;
    r.hit_probability = static_cast<double>(intercept_.count) / static_cast<double>(total_);
    r.diag.intercept = intercept_.mean;
    r.diag.slope = slope_.mean;
    for (const auto& m : per_epsilon_) {
        r.diag.differences.push_back(m.mean);
        r.diag.difference_se.push_back(m.std_error());
    }
    if (deterministic_) r.time = time_;
    return r;
}

RateEstimate rate_finite_difference(const PathTable& risk_paths, const TimeGrid& grid,
                                    const StoppingSample& stopping,
                                    std::span<const double> epsilons) {
    FiniteDifferenceAccumulator acc(grid, epsilons);
    acc.add(risk_paths, stopping);
    return acc.result();
}

RateEstimate rate_finite_difference(const PathTable& risk_paths, const TimeGrid& grid,
                                    std::size_t t_index, std::span<const double> epsilons) {
    return rate_finite_difference(risk_paths, grid,
                                  StoppingSample::at_index(grid, risk_paths.n_paths(), t_index),
                                  epsilons);
}

ConditionalRate rate_conditional(const Driver& driver, const SolutionSample& solution,
                                 const TimeGrid& grid, const StoppingSample& tau,
                                 const StoppingSample& sigma,
                                 std::span<const double> conditioning_state, int degree) {
    check_shapes(solution, grid, tau);
    const std::size_t n = solution.n_paths();
    if (sigma.size() != n || conditioning_state.size() != n) {
        throw ConfigError("conditioning inputs differ in path count");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (sigma.tau[i] > tau.tau[i] + 1e-12) throw DomainError("rate_conditional needs sigma <= tau");
    }
    ConditionalRate out;
    out.aggregate = rate_driver_expectation(driver, solution, grid, tau);

    // response 1{tau<T} * (-g) on every path
    std::vector<double> response(n, 0.0);
    const auto hits = driver_contributions(driver, solution, grid, tau);
    for (std::size_t i = 0, h = 0; i < n; ++i) {
        if (tau.hit[i]) response[i] = hits[h++];
    }
    const double p_hit = tau.hit_probability();
    const PolynomialProjector projector(conditioning_state, degree);
    out.fallback = projector.degenerate();
    if (out.fallback) {
        out.per_path.assign(n, out.aggregate.value);
        return out;
    }
    out.per_path = projector.project(response);
    for (double& v : out.per_path) v /= p_hit;
    return out;
}

}  // namespace reslab
