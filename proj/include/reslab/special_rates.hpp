#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "reslab/estimators.hpp"

namespace reslab {

// -(gamma/2) mean |Z_t|^2; z holds z_dim consecutive components per sample.
RateEstimate entropic_rate_brownian(double gamma, std::span<const double> z,
                                    std::size_t z_dim = 1);

// Claim f(N_T) on a Poisson filtration with intensity jump_rate.
struct EntropicJumpSpec {
    double gamma = 1.0;
    double jump_rate = 2.0;
    double horizon = 1.0;
    std::function<double(std::int64_t)> payoff;
    // f(n) = f(saturation) for n >= saturation; enables an exact tail sum.
    std::optional<std::int64_t> saturation;
    // sup |f|, required when no saturation is given.
    double payoff_bound = 0.0;
};

// Deterministic evaluation through the Poisson transition sums.
class EntropicJumpModel {
public:
    explicit EntropicJumpModel(EntropicJumpSpec spec);

    const EntropicJumpSpec& spec() const noexcept { return spec_; }
    // M(t, n) = E[exp(gamma f(N_T)) | N_t = n].
    double martingale(double t, std::int64_t n) const;
    // rho_t on {N_t = n}.
    double value(double t, std::int64_t n) const;
    // Jump of rho at time t from state n.
    double jump(double t, std::int64_t n) const;
    double lower_bound() const noexcept { return lower_; }
    double upper_bound() const noexcept { return upper_; }

private:
    EntropicJumpSpec spec_;
    double lower_ = 0.0;
    double upper_ = 0.0;
};

struct EntropicJumpRates {
    RateEstimate martingale_form;  // via M and its jump K
    RateEstimate driver_form;      // via the driver at U = jump of rho
};

EntropicJumpRates entropic_rate_jump(const EntropicJumpSpec& spec, double t);

// Call on S_T = s0 exp((mu - sigma^2/2) T + sigma W_T) (1 + gamma)^{N_T}.
struct JumpCallSpec {
    double s0 = 1.0;
    double strike = 1.0;
    double mu = 0.10;
    double sigma = 0.20;
    double gamma = -0.10;
    double jump_rate = 1.0;
    double horizon = 1.0;
};

struct JumpMarketRate {
    RateEstimate monte_carlo;
    RateEstimate series;  // truncated Poisson sum of Gaussian integrals
    std::size_t series_terms = 0;
};

JumpMarketRate jump_market_rate(const JumpCallSpec& spec, double t, std::size_t n_paths,
                                std::uint64_t seed, std::size_t max_terms = 200);
RateEstimate jump_market_rate_series(const JumpCallSpec& spec, double t,
                                     std::size_t max_terms = 200,
                                     std::size_t* terms_used = nullptr);
// E^Q[(S_T - K)+ | S_t = s] as a Poisson mixture of zero-rate call prices, and
// its derivative in s.
double jump_call_price(const JumpCallSpec& spec, double t, double s, std::size_t max_terms = 200);
// Same mixture with the Poisson weights for one t computed once.
class JumpCallPricer {
public:
    JumpCallPricer(const JumpCallSpec& spec, double t, std::size_t max_terms = 200);
    double price(double s) const;
    double delta(double s) const;
    // Both with one pass over the mixture.
    std::pair<double, double> price_and_delta(double s) const;

private:
    double strike_, vol_;
    std::vector<double> weights_, lifts_;
};
double jump_call_delta(const JumpCallSpec& spec, double t, double s, std::size_t max_terms = 200);

// Deterministic interest-rate band 0 <= r <= R.
struct RateBand {
    std::function<double(double)> lower;
    std::function<double(double)> upper;
    std::vector<double> breakpoints;

    static RateBand constant(double r, double R);
    double lower_integral(double from, double to) const;
    double upper_integral(double from, double to) const;
};

struct AmbiguousValueRate {
    double value = 0.0;  // mean of rho_t
    RateEstimate rate;
};

AmbiguousValueRate ambiguous_rate_value_and_rate(const RateBand& band,
                                                 std::span<const double> payoff, double t,
                                                 double horizon);

}  // namespace reslab
