#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace reslab {

// X = x0 + int_0^T mu(s) ds + int_0^T sigma(s) dW_s with deterministic mu, sigma.
struct GaussianClaimSpec {
    double x0 = 0.0;
    std::function<double(double)> mu;
    std::function<double(double)> sigma;
    double horizon = 1.0;
    // Kinks of mu/sigma; integration is split there.
    std::vector<double> breakpoints;

    static GaussianClaimSpec constant(double x0, double mu, double sigma, double horizon);
    // values[i] holds on [times[i], times[i+1]), times[0] = 0, last piece runs to T.
    static GaussianClaimSpec piecewise_constant(double x0, std::vector<double> times,
                                                std::vector<double> mus,
                                                std::vector<double> sigmas, double horizon);

    double drift_integral(double from, double to) const;
    double variance_integral(double from, double to) const;
};

// stochastic_integral is the realised int_0^t sigma dW along the path.
double var_value(const GaussianClaimSpec& spec, double t, double alpha,
                 double stochastic_integral);
double es_value(const GaussianClaimSpec& spec, double t, double alpha,
                double stochastic_integral);
double var_rate(const GaussianClaimSpec& spec, double t, double alpha);
double es_rate(const GaussianClaimSpec& spec, double t, double alpha);

// European put, zero interest rate, asset drift mu under the physical measure.
struct BSPutSpec {
    double s0 = 1000.0;
    double strike = 1000.0;
    double mu = 0.10;
    double sigma = 0.10;
    double horizon = 1.0;
};

double bs_put_price(const BSPutSpec& spec, double t, double s);
// N(-d+), i.e. minus the put delta. At t = T the limit 1{s<K} (1/2 at s = K).
double bs_put_short_delta(const BSPutSpec& spec, double t, double s);
// -mu * E[S_t N(-d+(t, S_t))] by adaptive quadrature over the lognormal law of S_t.
double bs_put_rate_t(const BSPutSpec& spec, double t);

struct VasicekBondSpec {
    double r0 = 0.02;
    double a = 1.0;
    double b = 0.02;
    double sigma = 0.01;
    double horizon = 1.0;
};

double vasicek_B(const VasicekBondSpec& spec, double t);
double vasicek_A(const VasicekBondSpec& spec, double t);
double vasicek_mean(const VasicekBondSpec& spec, double t);
double vasicek_variance(const VasicekBondSpec& spec, double t);
double vasicek_bond_price(const VasicekBondSpec& spec, double t, double r);
double vasicek_rate_t(const VasicekBondSpec& spec, double t);

// (1/gamma) ln mean exp(gamma X).
double entropic_value(double gamma, std::span<const double> samples);
// Conditional version: samples grouped by a discrete conditioning state.
std::map<std::int64_t, double> entropic_value(double gamma, std::span<const double> samples,
                                              std::span<const std::int64_t> state);

// Payoff scale * exp(sigma W_T) with W a Brownian motion under the physical
// measure and market price of risk mu / sigma. Without an explicit scale the
// normalisation exp(mu^2 T / (2 sigma^2)) is used.
struct ExpPayoffSpec {
    double mu = 0.10;
    double sigma = 0.10;
    double horizon = 1.0;
    std::optional<double> scale;

    double effective_scale() const;
};

double exp_payoff_rate(const ExpPayoffSpec& spec, double t);
// Risk process exp-payoff value and Z at (t, W_t).
double exp_payoff_value(const ExpPayoffSpec& spec, double t, double w);

}  // namespace reslab
