#include "reslab/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "reslab/errors.hpp"
#include "reslab/normal.hpp"

namespace reslab {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

double integrate_split(const std::function<double(double)>& f, double from, double to,
                       const std::vector<double>& breakpoints) {
    if (to <= from) return 0.0;
    std::vector<double> cuts{from};
    for (double b : breakpoints) {
        if (b > from && b < to) cuts.push_back(b);
    }
    cuts.push_back(to);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += Kronrod::integrate(f, cuts[i], cuts[i + 1], 15, 1e-12);
    }
    return total;
}

void check_time(double t, double horizon) {
    if (!(t >= 0.0 && t <= horizon)) throw DomainError("time must lie in [0, T]");
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

GaussianClaimSpec GaussianClaimSpec::constant(double x0, double mu, double sigma, double horizon) {
    return GaussianClaimSpec{x0, [mu](double) { return mu; }, [sigma](double) { return sigma; },
                             horizon, {}};
}

GaussianClaimSpec GaussianClaimSpec::piecewise_constant(double x0, std::vector<double> times,
                                                        std::vector<double> mus,
                                                        std::vector<double> sigmas,
                                                        double horizon) {
    if (times.empty() || times.size() != mus.size() || times.size() != sigmas.size() ||
        times.front() != 0.0 || !std::is_sorted(times.begin(), times.end())) {
        throw ConfigError("piecewise-constant spec needs sorted knots starting at 0");
    }
    auto piece = [times](const std::vector<double>& values) {
        return [times, values](double t) {
            const auto it = std::upper_bound(times.begin(), times.end(), t);
            return values[static_cast<std::size_t>(std::distance(times.begin(), it)) - 1];
        };
    };
    return GaussianClaimSpec{x0, piece(mus), piece(sigmas), horizon, times};
}

double GaussianClaimSpec::drift_integral(double from, double to) const {
    return integrate_split(mu, from, to, breakpoints);
}

double GaussianClaimSpec::variance_integral(double from, double to) const {
    return integrate_split([this](double s) { return sigma(s) * sigma(s); }, from, to,
                           breakpoints);
}

double var_value(const GaussianClaimSpec& spec, double t, double alpha,
                 double stochastic_integral) {
    check_alpha(alpha);
    check_time(t, spec.horizon);
    const double tail = std::sqrt(spec.variance_integral(t, spec.horizon));
    return spec.x0 + spec.drift_integral(0.0, spec.horizon) + stochastic_integral -
           norm_quantile(alpha) * tail;
}

double es_value(const GaussianClaimSpec& spec, double t, double alpha,
                double stochastic_integral) {
    check_alpha(alpha);
    check_time(t, spec.horizon);
    const double tail = std::sqrt(spec.variance_integral(t, spec.horizon));
    return spec.x0 + spec.drift_integral(0.0, spec.horizon) + stochastic_integral +
           norm_pdf(norm_quantile(alpha)) / alpha * tail;
}

namespace {

// sigma_t^2 / sqrt(int_t^T sigma^2)
double rate_factor(const GaussianClaimSpec& spec, double t) {
    if (!(t >= 0.0 && t < spec.horizon)) {
        throw DomainError("rate requested at t >= T: the residual variance vanishes");
    }
    const double residual = spec.variance_integral(t, spec.horizon);
    if (!(residual > 0.0)) throw DomainError("residual variance int_t^T sigma^2 is zero");
    const double s = spec.sigma(t);
    return s * s / std::sqrt(residual);
}

}  // namespace

double var_rate(const GaussianClaimSpec& spec, double t, double alpha) {
    check_alpha(alpha);
    const double z = alpha == 0.5 ? 0.0 : norm_quantile(alpha);
    return 0.5 * z * rate_factor(spec, t);
}

double es_rate(const GaussianClaimSpec& spec, double t, double alpha) {
    check_alpha(alpha);
    return -norm_pdf(norm_quantile(alpha)) / (2.0 * alpha) * rate_factor(spec, t);
}

namespace {

void check_put(const BSPutSpec& spec) {
    if (!(spec.s0 > 0.0 && spec.strike > 0.0)) throw DomainError("s0 and K must be positive");
    if (!(spec.sigma > 0.0)) throw DomainError("put volatility must be positive");
    if (!(spec.horizon > 0.0)) throw DomainError("horizon must be positive");
}

}  // namespace

double bs_put_price(const BSPutSpec& spec, double t, double s) {
    check_put(spec);
    check_time(t, spec.horizon);
    if (!(s > 0.0)) throw DomainError("asset value must be positive");
    const double tau = spec.horizon - t;
    if (tau <= 0.0) return std::max(spec.strike - s, 0.0);
    const double vol = spec.sigma * std::sqrt(tau);
    const double d_plus = (std::log(s / spec.strike) + 0.5 * vol * vol) / vol;
    const double d_minus = d_plus - vol;
    return spec.strike * norm_cdf(-d_minus) - s * norm_cdf(-d_plus);
}

double bs_put_short_delta(const BSPutSpec& spec, double t, double s) {
    const double tau = spec.horizon - t;
    if (tau <= 0.0) return s < spec.strike ? 1.0 : (s == spec.strike ? 0.5 : 0.0);
    const double vol = spec.sigma * std::sqrt(tau);
    const double d_plus = (std::log(s / spec.strike) + 0.5 * vol * vol) / vol;
    return norm_cdf(-d_plus);
}

double bs_put_rate_t(const BSPutSpec& spec, double t) {
    check_put(spec);
    if (!(t >= 0.0 && t < spec.horizon)) throw DomainError("put rate is defined for t in [0, T)");
    if (spec.mu == 0.0) return 0.0;
    if (t == 0.0) return -spec.mu * spec.s0 * bs_put_short_delta(spec, 0.0, spec.s0);
    // S_t = s0 exp((mu - sigma^2/2) t + sigma sqrt(t) xi), xi standard normal
    const double drift = std::log(spec.s0) + (spec.mu - 0.5 * spec.sigma * spec.sigma) * t;
    const double spread = spec.sigma * std::sqrt(t);
    auto integrand = [&](double xi) {
        // density underflows long before this; avoids inf * 0 at the far nodes
        if (std::abs(xi) > 38.0) return 0.0;
        const double s = std::exp(drift + spread * xi);
        return s * bs_put_short_delta(spec, t, s) * norm_pdf(xi);
    };
    double error = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    const double mean = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, -inf, inf, 20, 1e-10, &error);
    return -spec.mu * mean;
}

namespace {

void check_vasicek(const VasicekBondSpec& spec) {
    if (!(spec.a > 0.0)) throw DomainError("Vasicek a must be positive");
    if (!(spec.sigma >= 0.0)) throw DomainError("Vasicek sigma must be non-negative");
}

}  // namespace

double vasicek_B(const VasicekBondSpec& spec, double t) {
    check_vasicek(spec);
    return -std::expm1(-spec.a * (spec.horizon - t)) / spec.a;
}

double vasicek_A(const VasicekBondSpec& spec, double t) {
    const double B = vasicek_B(spec, t);
    const double tau = spec.horizon - t;
    const double a = spec.a;
    return -spec.sigma * spec.sigma / (4.0 * a * a) * (a * B * B + 2.0 * B - 2.0 * tau) +
           spec.b * (B - tau);
}

double vasicek_mean(const VasicekBondSpec& spec, double t) {
    check_vasicek(spec);
    const double decay = std::exp(-spec.a * t);
    return spec.r0 * decay + spec.b * (1.0 - decay);
}

double vasicek_variance(const VasicekBondSpec& spec, double t) {
    check_vasicek(spec);
    return spec.sigma * spec.sigma * (-std::expm1(-2.0 * spec.a * t)) / (2.0 * spec.a);
}

double vasicek_bond_price(const VasicekBondSpec& spec, double t, double r) {
    check_time(t, spec.horizon);
    return std::exp(vasicek_A(spec, t) - vasicek_B(spec, t) * r);
}

double vasicek_rate_t(const VasicekBondSpec& spec, double t) {
    check_time(t, spec.horizon);
    const double A = vasicek_A(spec, t);
    const double B = vasicek_B(spec, t);
    const double m = vasicek_mean(spec, t);
    const double v = vasicek_variance(spec, t);
    return (m - B * v) * std::exp(A + 0.5 * v * B * B - m * B);
}

namespace {

constexpr double kMaxExponent = 709.0;

double log_mean_exp(double gamma, std::span<const double> xs) {
    double top = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
        const double e = gamma * x;
        if (!std::isfinite(e) || e > kMaxExponent) {
            throw ScalingError("exp(gamma X) overflows: reduce gamma or bound the claim X");
        }
        top = std::max(top, e);
    }
    double sum = 0.0;
    for (double x : xs) sum += std::exp(gamma * x - top);
    return top + std::log(sum / static_cast<double>(xs.size()));
}

}  // namespace

double entropic_value(double gamma, std::span<const double> samples) {
    if (!(gamma > 0.0)) throw DomainError("entropic parameter gamma must be positive");
    if (samples.empty()) throw EstimationError("entropic value of an empty sample");
    return log_mean_exp(gamma, samples) / gamma;
}

std::map<std::int64_t, double> entropic_value(double gamma, std::span<const double> samples,
                                              std::span<const std::int64_t> state) {
    if (samples.size() != state.size()) throw ConfigError("samples and state differ in length");
    std::map<std::int64_t, std::vector<double>> groups;
    for (std::size_t i = 0; i < samples.size(); ++i) groups[state[i]].push_back(samples[i]);
    std::map<std::int64_t, double> out;
    for (const auto& [key, xs] : groups) out[key] = entropic_value(gamma, xs);
    return out;
}

double ExpPayoffSpec::effective_scale() const {
    if (scale) return *scale;
    return std::exp(mu * mu * horizon / (2.0 * sigma * sigma));
}

double exp_payoff_rate(const ExpPayoffSpec& spec, double t) {
    if (!(spec.sigma > 0.0)) throw DomainError("exp payoff needs sigma > 0");
    if (!(t >= 0.0 && t < spec.horizon)) throw DomainError("exp payoff rate needs t in [0, T)");
    return spec.effective_scale() * spec.mu *
           std::exp(0.5 * spec.sigma * spec.sigma * spec.horizon - spec.mu * (spec.horizon - t));
}

double exp_payoff_value(const ExpPayoffSpec& spec, double t, double w) {
    if (!(spec.sigma > 0.0)) throw DomainError("exp payoff needs sigma > 0");
    const double tau = spec.horizon - t;
    return spec.effective_scale() *
           std::exp(spec.sigma * w + (0.5 * spec.sigma * spec.sigma - spec.mu) * tau);
}

}  // namespace reslab
