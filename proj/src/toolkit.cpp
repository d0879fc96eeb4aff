#include "reslab/toolkit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "reslab/errors.hpp"

namespace reslab {

AcceptanceLevel AcceptanceLevel::finite(double a) {
    if (!std::isfinite(a)) throw DomainError("use the explicit infinite levels instead of inf");
    return AcceptanceLevel(Kind::finite, a);
}

double AcceptanceLevel::value() const {
    if (kind_ != Kind::finite) throw DomainError("infinite acceptance level has no finite value");
    return value_;
}

AcceptanceDecision is_acceptable(const RateEstimate& rate, const AcceptanceQuery& query) {
    if (!std::isfinite(rate.value) || !(rate.std_error >= 0.0)) {
        throw EstimationError("acceptance test on an undefined rate");
    }
    if (rate.time && std::abs(*rate.time - query.t) > 1e-9) {
        throw DomainError("rate was estimated at a different time than the query");
    }
    switch (query.level.kind()) {
        case AcceptanceLevel::Kind::plus_infinity: return {true, false};
        case AcceptanceLevel::Kind::minus_infinity: return {false, false};
        case AcceptanceLevel::Kind::finite: break;
    }
    const double a = query.level.value();
    return {rate.value <= a, std::abs(rate.value - a) < 2.0 * rate.std_error};
}

double min_acceptance_level(const RateEstimate& rate) {
    if (!std::isfinite(rate.value)) throw EstimationError("undefined rate has no acceptance level");
    return rate.value;
}

std::vector<FamilyCheck> acceptance_family_properties(const FamilyProbe& probe) {
    std::vector<FamilyCheck> out;
    const double levels[] = {-probe.unit, 0.0, probe.unit};
    auto member = [](const RateEstimate& r, double a) { return r.value <= a; };
    for (double a : levels) {
        FamilyCheck cash{"cash_insensitive", a, probe.flags.y_independent, true};
        if (cash.applicable) cash.passed = member(probe.base, a) == member(probe.shifted, a);
        out.push_back(cash);
    }
    for (double a : levels) {
        FamilyCheck homog{"positively_homogeneous", a, probe.flags.positively_homogeneous, true};
        if (homog.applicable) {
            homog.passed = member(probe.base, a) == member(probe.scaled, probe.alpha * a);
        }
        out.push_back(homog);
    }
    return out;
}

RateCurve::RateCurve(std::vector<double> times, std::vector<double> values, double horizon)
    : times_(std::move(times)), values_(std::move(values)), horizon_(horizon) {
    if (times_.empty() || times_.size() != values_.size()) {
        throw ConfigError("rate curve needs matching non-empty times and values");
    }
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(times_[i] >= 0.0 && times_[i] < horizon_)) {
            throw ConfigError("rate curve times must lie in [0, T)");
        }
        if (i > 0 && !(times_[i] > times_[i - 1])) {
            throw ConfigError("rate curve times must be strictly increasing");
        }
    }
    cumulative_.assign(times_.size(), 0.0);
    for (std::size_t i = 1; i < times_.size(); ++i) {
        cumulative_[i] = cumulative_[i - 1] + 0.5 * (times_[i] - times_[i - 1]) * (values_[i] + values_[i - 1]);
    }
}

double RateCurve::operator()(double t) const {
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
    return (1.0 - w) * values_[j - 1] + w * values_[j];
}

double RateCurve::primitive(double t) const {
    if (t <= times_.front()) return (t - times_.front()) * values_.front();
    if (t >= times_.back()) return cumulative_.back() + (t - times_.back()) * values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times_.begin()) - 1;
    return cumulative_[j] + 0.5 * (t - times_[j]) * (values_[j] + (*this)(t));
}

double RateCurve::integral(double from, double to) const {
    if (to < from) return -integral(to, from);
    from = std::max(from, 0.0);
    to = std::min(to, horizon_);
    if (to <= from) return 0.0;
    return primitive(to) - primitive(from);
}

Driver resilience_neutral_driver(const Driver& base, RateCurve curve) {
    DriverFlags flags = base.flags();
    flags.positively_homogeneous = false;
    const double horizon = curve.horizon();
    return Driver(
        base.name() + "_neutral",
        [base, curve = std::move(curve), horizon](const DriverArgs& a) {
            DriverArgs shifted = a;
            shifted.y = a.y - curve.integral(a.t, horizon);
            return base(shifted) + curve(a.t);
        },
        flags);
}

double rra(const RateCurve& curve, std::span<const double> rescale, double t) {
    if (rescale.size() != curve.times().size()) {
        throw ConfigError("rescale c must be supplied on the rate-curve times");
    }
    for (double c : rescale) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("rescale c must be finite and >= 0");
    }
    // integrand c * rho-dot on the curve knots, then the curve's trapezoid rule
    std::vector<double> product(rescale.size());
    for (std::size_t i = 0; i < product.size(); ++i) product[i] = rescale[i] * curve.values()[i];
    return RateCurve(curve.times(), std::move(product), curve.horizon())
        .integral(t, curve.horizon());
}

ExpansionReport adjusted_risk_expansion_check(const PathTable& risk_paths, const TimeGrid& grid,
                                              const RateCurve& curve,
                                              std::span<const double> rescale,
                                              std::size_t s_index,
                                              std::span<const std::size_t> offsets,
                                              double tolerance_se) {
    if (risk_paths.n_points() != grid.size()) throw ConfigError("risk paths must cover the grid");
    if (offsets.empty()) throw ConfigError("expansion check needs at least one offset");
    const std::size_t m = offsets.size();
    const double s = grid.time(s_index);
    const double rra_s = rra(curve, rescale, s);

    ExpansionReport rep;
    // least-squares weights for increment ~ b1 h + b2 h^2 (no intercept)
    Eigen::MatrixXd X(static_cast<Eigen::Index>(m), 2);
    std::vector<double> rra_shift(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = s_index + offsets[j];
        if (k > grid.n_steps()) throw ConfigError("expansion offset runs past the horizon");
        const double h = grid.time(k) - s;
        rep.offsets.push_back(h);
        X(static_cast<Eigen::Index>(j), 0) = h;
        X(static_cast<Eigen::Index>(j), 1) = h * h;
        rra_shift[j] = rra(curve, rescale, grid.time(k)) - rra_s;
    }
    const Eigen::MatrixXd weights = (X.transpose() * X).ldlt().solve(X.transpose());

    std::vector<SampleMoments> inc(m);
    SampleMoments slope, curvature;
    for (std::size_t i = 0; i < risk_paths.n_paths(); ++i) {
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = risk_paths(i, s_index + offsets[j]) - risk_paths(i, s_index) + rra_shift[j];
            inc[j].add(d);
            b1 += weights(0, static_cast<Eigen::Index>(j)) * d;
            b2 += weights(1, static_cast<Eigen::Index>(j)) * d;
        }
        slope.add(b1);
        curvature.add(b2);
    }
    for (const auto& mm : inc) {
        rep.increments.push_back(mm.mean);
        rep.increment_se.push_back(mm.std_error());
    }
    rep.fitted_slope = slope.mean;
    rep.slope_se = slope.std_error();
    rep.fitted_curvature = curvature.mean;
    const std::size_t ci = static_cast<std::size_t>(
        std::lower_bound(curve.times().begin(), curve.times().end(), s - 1e-12) -
        curve.times().begin());
    const double c_s = ci < rescale.size() ? rescale[ci] : rescale.back();
    rep.expected_slope = (1.0 - c_s) * curve(s);
    rep.slope_ok = std::abs(rep.fitted_slope - rep.expected_slope) <=
                   tolerance_se * rep.slope_se + 1e-12 * (1.0 + std::abs(rep.expected_slope));
    return rep;
}

}  // namespace reslab
