#include "reslab/lsmc.hpp"

#include <cmath>

#include "reslab/errors.hpp"
#include "reslab/regression.hpp"

namespace reslab {

LsmcSolution lsmc_solve(const Driver& driver, std::span<const double> terminal_payoff,
                        const StatePaths& state, const NoiseBundle& noise, const TimeGrid& grid,
                        const LsmcOptions& options) {
    if (driver.flags().jump_aware) {
        throw ConfigError("lsmc_solve handles Brownian drivers only");
    }
    if (driver.flags().growth != GrowthClass::lipschitz) {
        throw ConfigError("lsmc_solve requires a Lipschitz driver");
    }
    const std::size_t n = state.values.n_paths();
    const std::size_t steps = grid.n_steps();
    if (state.values.n_points() != grid.size() || !(noise.grid() == grid)) {
        throw ConfigError("state paths and noise must live on the solver grid");
    }
    if (noise.n_paths() != n || terminal_payoff.size() != n) {
        throw ConfigError("payoff, state and noise differ in path count");
    }
    if (noise.dim() != 1) throw ConfigError("lsmc_solve supports one Brownian dimension");

    const double dt = grid.dt();
    LsmcSolution out;
    auto& sample = out.sample;
    sample.rho = PathTable(n, steps + 1);
    sample.z = PathTable(n, steps + 1);
    sample.state = state.values;

    std::vector<double> y(terminal_payoff.begin(), terminal_payoff.end());
    for (std::size_t i = 0; i < n; ++i) sample.rho(i, steps) = y[i];

    std::vector<double> feature(n), work(n), next(n);
    SampleMoments initial;
    for (std::size_t kk = steps; kk-- > 0;) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = state.values(i, kk);
            if (options.transform == BasisTransform::log) {
                if (!(x > 0.0)) throw ConfigError("log basis needs a positive state");
                feature[i] = std::log(x);
            } else {
                feature[i] = x;
            }
        }
        const PolynomialProjector projector(feature, options.degree);
        const std::vector<double> continuation = projector.project(y);
        for (std::size_t i = 0; i < n; ++i) {
            work[i] = (y[i] - continuation[i]) * noise.increment(i, kk);
        }
        std::vector<double> z = projector.project(work);
        for (double& v : z) v /= dt;

        std::vector<double> base;
        if (options.martingale_control) {
            for (std::size_t i = 0; i < n; ++i) work[i] = y[i] - z[i] * noise.increment(i, kk);
            base = projector.project(work);
        } else {
            base = continuation;
        }
        const double t = grid.time(kk);
        for (std::size_t i = 0; i < n; ++i) {
            const double zi[1] = {z[i]};
            const double g = driver.evaluate(t, state.values(i, kk), continuation[i], zi);
            next[i] = base[i] + g * dt;
            sample.rho(i, kk) = next[i];
            sample.z(i, kk) = z[i];
            if (kk == 0) {
                initial.add((options.martingale_control ? work[i] : y[i]) + g * dt);
            }
        }
        y.swap(next);
    }
    for (std::size_t i = 0; i < n; ++i) sample.z(i, steps) = sample.z(i, steps - 1);
    out.initial_value = sample.rho(0, 0);
    out.initial_se = initial.std_error();
    return out;
}

}  // namespace reslab
