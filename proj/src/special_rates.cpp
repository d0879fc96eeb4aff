#include "reslab/special_rates.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "reslab/errors.hpp"
#include "reslab/normal.hpp"
#include "reslab/rng.hpp"
#include "reslab/stats.hpp"

namespace reslab {

namespace {

double poisson_pmf(double mean, std::int64_t k) {
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    const double kd = static_cast<double>(k);
    return std::exp(-mean + kd * std::log(mean) - std::lgamma(kd + 1.0));
}

// P(N > k) for N ~ Poisson(mean).
double poisson_tail_above(double mean, std::int64_t k) {
    if (mean == 0.0) return 0.0;
    return boost::math::gamma_p(static_cast<double>(k + 1), mean);
}

// P(N >= j).
double poisson_tail_from(double mean, std::int64_t j) {
    if (j <= 0) return 1.0;
    return poisson_tail_above(mean, j - 1);
}

}  // namespace

RateEstimate entropic_rate_brownian(double gamma, std::span<const double> z, std::size_t z_dim) {
    if (!(gamma > 0.0)) throw DomainError("entropic gamma must be positive");
    if (z_dim == 0 || z.size() % z_dim != 0) throw ConfigError("z samples do not match z_dim");
    SampleMoments m;
    for (std::size_t i = 0; i < z.size(); i += z_dim) {
        double sq = 0.0;
        for (std::size_t d = 0; d < z_dim; ++d) sq += z[i + d] * z[i + d];
        m.add(-0.5 * gamma * sq);
    }
    if (m.count == 0) throw EstimationError("no Z samples supplied");
    RateEstimate r;
    r.value = m.mean;
    r.std_error = m.std_error();
    r.method = RateMethod::driver_expectation;
    r.samples = m.count;
    return r;
}

EntropicJumpModel::EntropicJumpModel(EntropicJumpSpec spec) : spec_(std::move(spec)) {
    if (!(spec_.gamma > 0.0)) throw DomainError("entropic gamma must be positive");
    if (!(spec_.jump_rate >= 0.0)) throw DomainError("jump rate must be non-negative");
    if (!(spec_.horizon > 0.0)) throw DomainError("horizon must be positive");
    if (!spec_.payoff) throw ConfigError("entropic jump model needs a payoff of N_T");
    if (spec_.saturation) {
        if (*spec_.saturation < 0) throw ConfigError("saturation count must be non-negative");
        lower_ = upper_ = spec_.payoff(0);
        for (std::int64_t n = 1; n <= *spec_.saturation; ++n) {
            lower_ = std::min(lower_, spec_.payoff(n));
            upper_ = std::max(upper_, spec_.payoff(n));
        }
    } else {
        if (!(spec_.payoff_bound > 0.0)) {
            throw ConfigError("payoff_bound is required when no saturation count is given");
        }
        lower_ = -spec_.payoff_bound;
        upper_ = spec_.payoff_bound;
    }
    if (spec_.gamma * std::max(std::abs(lower_), std::abs(upper_)) > 700.0) {
        throw ScalingError("exp(gamma X) overflows: reduce gamma or bound the claim X");
    }
}

double EntropicJumpModel::martingale(double t, std::int64_t n) const {
    if (!(t >= 0.0 && t <= spec_.horizon)) throw DomainError("time outside [0, T]");
    const double mean = spec_.jump_rate * (spec_.horizon - t);
    const double gamma = spec_.gamma;
    const auto& f = spec_.payoff;
    if (spec_.saturation) {
        const std::int64_t m = *spec_.saturation;
        if (n >= m) return std::exp(gamma * f(m));
        double total = 0.0;
        for (std::int64_t k = 0; k < m - n; ++k) total += poisson_pmf(mean, k) * std::exp(gamma * f(n + k));
        return total + poisson_tail_from(mean, m - n) * std::exp(gamma * f(m));
    }
    // Bounded payoff: truncate once the remaining mass cannot move the sum.
    const double spread = std::exp(gamma * (upper_ - lower_));
    double total = 0.0;
    for (std::int64_t k = 0;; ++k) {
        total += poisson_pmf(mean, k) * std::exp(gamma * f(n + k));
        if (poisson_tail_above(mean, k) * spread < 1e-16) break;
        if (k > 100000) throw TruncationError("Poisson transition sum did not converge");
    }
    return total;
}

double EntropicJumpModel::value(double t, std::int64_t n) const {
    return std::log(martingale(t, n)) / spec_.gamma;
}

double EntropicJumpModel::jump(double t, std::int64_t n) const {
    return value(t, n + 1) - value(t, n);
}

EntropicJumpRates entropic_rate_jump(const EntropicJumpSpec& spec, double t) {
    const EntropicJumpModel model(spec);
    if (!(t >= 0.0 && t < spec.horizon)) throw DomainError("entropic jump rate needs t in [0, T)");
    const double gamma = spec.gamma;
    const double lambda = spec.jump_rate;
    const double floor = -1.0 + std::exp(gamma * (model.lower_bound() - model.upper_bound()));
    const Driver driver = drivers::entropic_jump(gamma, lambda);
    const double mean_t = lambda * t;

    double rep1 = 0.0, rep2 = 0.0;
    const auto visit = [&](std::int64_t n) {
        const double w = poisson_pmf(mean_t, n);
        const double m0 = model.martingale(t, n);
        const double ratio = (model.martingale(t, n + 1) - m0) / m0;
        if (ratio < floor - 1e-12) {
            throw InvariantError("K/M fell below the lower bound -1 + c/C");
        }
        rep1 += w * lambda / gamma * (std::log1p(ratio) - ratio);
        rep2 -= w * driver.evaluate(t, 0.0, model.value(t, n), {}, model.jump(t, n));
    };
    if (spec.saturation) {
        // beyond the saturation count the claim is known: no jump, no contribution
        for (std::int64_t n = 0; n < *spec.saturation; ++n) visit(n);
    } else {
        for (std::int64_t n = 0;; ++n) {
            visit(n);
            if (poisson_tail_above(mean_t, n) < 1e-16) break;
            if (n > 100000) throw TruncationError("Poisson sum over N_t did not converge");
        }
    }
    EntropicJumpRates out;
    out.martingale_form = RateEstimate::exact(rep1, t);
    out.driver_form = RateEstimate::exact(rep2, t);
    out.driver_form.method = RateMethod::driver_expectation;
    return out;
}

namespace {

void check_jump_call(const JumpCallSpec& spec, double t) {
    if (!(spec.s0 > 0.0 && spec.strike > 0.0)) throw DomainError("s0 and K must be positive");
    if (!(spec.sigma > 0.0)) throw DomainError("jump call needs sigma > 0");
    if (!(spec.gamma > -1.0)) throw DomainError("jump multiplier gamma must exceed -1");
    if (!(spec.jump_rate >= 0.0)) throw DomainError("jump rate must be non-negative");
    if (!(t >= 0.0 && t < spec.horizon)) throw DomainError("jump call rate needs t in [0, T)");
}

std::size_t series_length(double mean, std::size_t max_terms) {
    for (std::size_t n = 0; n < max_terms; ++n) {
        if (poisson_tail_above(mean, static_cast<std::int64_t>(n)) <= 1e-12) return n + 1;
    }
    if (poisson_tail_above(mean, static_cast<std::int64_t>(max_terms) - 1) > 1e-10) {
        throw TruncationError("Poisson truncation leaves tail mass above 1e-10; increase max_terms");
    }
    return max_terms;
}

}  // namespace

RateEstimate jump_market_rate_series(const JumpCallSpec& spec, double t, std::size_t max_terms,
                                     std::size_t* terms_used) {
    check_jump_call(spec, t);
    if (spec.mu == 0.0) return RateEstimate::exact(0.0, t);
    const double T = spec.horizon;
    const double tau = T - t;
    const double sigma = spec.sigma;
    const double theta = spec.mu / sigma;
    // L = sigma U - theta D with U = W_T ~ N(0, T), D = W_T - W_t ~ N(0, tau)
    const double var_l = sigma * sigma * T + theta * theta * tau - 2.0 * sigma * theta * tau;
    const double cov_lu = sigma * T - theta * tau;
    const double mean_n = spec.jump_rate * T;
    const std::size_t terms = spec.gamma == 0.0 ? 1 : series_length(mean_n, max_terms);
    if (terms_used) *terms_used = terms;
    double total = 0.0;
    for (std::size_t n = 0; n < terms; ++n) {
        const double weight =
            spec.gamma == 0.0 ? 1.0 : poisson_pmf(mean_n, static_cast<std::int64_t>(n));
        const double a = std::log(spec.s0) + (spec.mu - 0.5 * sigma * sigma) * T +
                         static_cast<double>(n) * std::log1p(spec.gamma);
        const double barrier = (std::log(spec.strike) - a) / sigma;
        total += weight * std::exp(a + 0.5 * var_l) * norm_cdf((cov_lu - barrier) / std::sqrt(T));
    }
    return RateEstimate::exact(spec.mu * std::exp(-0.5 * theta * theta * tau) * total, t);
}

JumpMarketRate jump_market_rate(const JumpCallSpec& spec, double t, std::size_t n_paths,
                                std::uint64_t seed, std::size_t max_terms) {
    check_jump_call(spec, t);
    if (n_paths < 2) throw ConfigError("jump_market_rate needs at least two paths");
    JumpMarketRate out;
    out.series = jump_market_rate_series(spec, t, max_terms, &out.series_terms);

    const double T = spec.horizon;
    const double tau = T - t;
    const double theta = spec.mu / spec.sigma;
    const double scale = spec.mu * std::exp(-0.5 * theta * theta * tau);
    const double drift = (spec.mu - 0.5 * spec.sigma * spec.sigma) * T;
    const double log_jump = std::log1p(spec.gamma);
    SampleMoments m;
    for (std::size_t i = 0; i < n_paths; ++i) {
        // W and N are independent: separate streams for each.
        PathStream gauss(seed, i, StreamTag::brownian);
        PathStream jumps(seed, i, StreamTag::poisson);
        const double w_t = std::sqrt(t) * gauss.normal();
        const double dw = std::sqrt(tau) * gauss.normal();
        const double count = spec.jump_rate > 0.0 ? jumps.poisson(spec.jump_rate * T) : 0.0;
        const double s_T =
            spec.s0 * std::exp(drift + spec.sigma * (w_t + dw) + count * log_jump);
        m.add(s_T >= spec.strike ? scale * std::exp(-theta * dw) * s_T : 0.0);
    }
    out.monte_carlo.value = m.mean;
    out.monte_carlo.std_error = m.std_error();
    out.monte_carlo.method = RateMethod::driver_expectation;
    out.monte_carlo.samples = m.count;
    out.monte_carlo.time = t;
    return out;
}

JumpCallPricer::JumpCallPricer(const JumpCallSpec& spec, double t, std::size_t max_terms)
    : strike_(spec.strike), vol_(spec.sigma * std::sqrt(std::max(spec.horizon - t, 0.0))) {
    const double mean = spec.jump_rate * (spec.horizon - t);
    if (spec.gamma == 0.0 || mean <= 0.0) {
        weights_ = {1.0};
        lifts_ = {1.0};
        return;
    }
    const std::size_t terms = series_length(mean, max_terms);
    for (std::size_t n = 0; n < terms; ++n) {
        weights_.push_back(poisson_pmf(mean, static_cast<std::int64_t>(n)));
        lifts_.push_back(std::pow(1.0 + spec.gamma, static_cast<double>(n)));
    }
}

std::pair<double, double> JumpCallPricer::price_and_delta(double s) const {
    double price = 0.0, delta = 0.0;
    for (std::size_t n = 0; n < weights_.size(); ++n) {
        const double x = s * lifts_[n];
        if (vol_ <= 0.0) {
            price += weights_[n] * std::max(x - strike_, 0.0);
            delta += weights_[n] * lifts_[n] * (x > strike_ ? 1.0 : (x == strike_ ? 0.5 : 0.0));
            continue;
        }
        const double d_plus = (std::log(x / strike_) + 0.5 * vol_ * vol_) / vol_;
        const double n_plus = norm_cdf(d_plus);
        price += weights_[n] * (x * n_plus - strike_ * norm_cdf(d_plus - vol_));
        delta += weights_[n] * lifts_[n] * n_plus;
    }
    return {price, delta};
}

double JumpCallPricer::price(double s) const { return price_and_delta(s).first; }
double JumpCallPricer::delta(double s) const { return price_and_delta(s).second; }

double jump_call_price(const JumpCallSpec& spec, double t, double s, std::size_t max_terms) {
    return JumpCallPricer(spec, t, max_terms).price(s);
}

double jump_call_delta(const JumpCallSpec& spec, double t, double s, std::size_t max_terms) {
    return JumpCallPricer(spec, t, max_terms).delta(s);
}

RateBand RateBand::constant(double r, double R) {
    return RateBand{[r](double) { return r; }, [R](double) { return R; }, {}};
}

namespace {

double band_integral(const std::function<double(double)>& f, const std::vector<double>& cuts_in,
                     double from, double to) {
    if (to <= from) return 0.0;
    std::vector<double> cuts{from};
    for (double c : cuts_in) {
        if (c > from && c < to) cuts.push_back(c);
    }
    cuts.push_back(to);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i],
                                                                               cuts[i + 1], 15, 1e-12);
    }
    return total;
}

}  // namespace

double RateBand::lower_integral(double from, double to) const {
    return band_integral(lower, breakpoints, from, to);
}

double RateBand::upper_integral(double from, double to) const {
    return band_integral(upper, breakpoints, from, to);
}

AmbiguousValueRate ambiguous_rate_value_and_rate(const RateBand& band,
                                                 std::span<const double> payoff, double t,
                                                 double horizon) {
    if (!(t >= 0.0 && t <= horizon)) throw DomainError("time outside [0, T]");
    if (payoff.empty()) throw EstimationError("no payoff samples supplied");
    const double r = band.lower(t);
    const double R = band.upper(t);
    if (!(r >= 0.0 && r <= R)) throw DomainError("rate band needs 0 <= r <= R");
    const double disc_r = std::exp(-band.lower_integral(t, horizon));
    const double disc_R = std::exp(-band.upper_integral(t, horizon));
    SampleMoments value, rate;
    for (double x : payoff) {
        const double pos = std::max(x, 0.0) * disc_r;
        const double neg = std::max(-x, 0.0) * disc_R;
        value.add(pos - neg);
        rate.add(r * pos - R * neg);
    }
    AmbiguousValueRate out;
    out.value = value.mean;
    out.rate.value = rate.mean;
    out.rate.std_error = rate.std_error();
    out.rate.method = RateMethod::driver_expectation;
    out.rate.samples = rate.count;
    out.rate.time = t;
    return out;
}

}  // namespace reslab
