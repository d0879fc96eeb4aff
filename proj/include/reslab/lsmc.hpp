#pragma once

#include <span>

#include "reslab/driver.hpp"
#include "reslab/estimators.hpp"
#include "reslab/grid.hpp"
#include "reslab/noise.hpp"
#include "reslab/paths.hpp"

namespace reslab {

enum class BasisTransform { identity, log };

struct LsmcOptions {
    int degree = 4;
    BasisTransform transform = BasisTransform::identity;
    // Subtract Z * dW from the regression response (variance reduction that
    // leaves the conditional expectation unchanged).
    bool martingale_control = true;
};

struct LsmcSolution {
    SolutionSample sample;
    double initial_value = 0.0;
    double initial_se = 0.0;
};

// Explicit backward scheme
//   Z_k = E[(Y_{k+1} - C_k) dW_k | x_k] / dt,  C_k = E[Y_{k+1} | x_k]
//   Y_k = E[Y_{k+1} - Z_k dW_k | x_k] + g(t_k, x_k, C_k, Z_k) dt
// with conditional expectations by per-slice polynomial regression.
LsmcSolution lsmc_solve(const Driver& driver, std::span<const double> terminal_payoff,
                        const StatePaths& state, const NoiseBundle& noise, const TimeGrid& grid,
                        const LsmcOptions& options = {});

}  // namespace reslab
