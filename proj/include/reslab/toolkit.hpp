#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "reslab/driver.hpp"
#include "reslab/estimators.hpp"
#include "reslab/grid.hpp"

namespace reslab {

// Extended real level with explicit infinite sentinels.
class AcceptanceLevel {
public:
    enum class Kind { finite, plus_infinity, minus_infinity };

    static AcceptanceLevel finite(double a);
    static AcceptanceLevel plus_infinity() noexcept { return AcceptanceLevel(Kind::plus_infinity, 0.0); }
    static AcceptanceLevel minus_infinity() noexcept { return AcceptanceLevel(Kind::minus_infinity, 0.0); }

    Kind kind() const noexcept { return kind_; }
    double value() const;  // finite levels only

private:
    AcceptanceLevel(Kind kind, double v) noexcept : kind_(kind), value_(v) {}
    Kind kind_;
    double value_;
};

struct AcceptanceQuery {
    AcceptanceLevel level = AcceptanceLevel::finite(0.0);
    double t = 0.0;
};

struct AcceptanceDecision {
    bool accepted = false;
    bool marginal = false;  // |value - a| < 2 SE
};

AcceptanceDecision is_acceptable(const RateEstimate& rate, const AcceptanceQuery& query);
double min_acceptance_level(const RateEstimate& rate);

struct FamilyCheck {
    std::string property;
    double level = 0.0;
    bool applicable = true;
    bool passed = true;
};

// Rates of a claim X, of X + h and of alpha X under common random numbers.
struct FamilyProbe {
    DriverFlags flags;
    RateEstimate base;
    RateEstimate shifted;
    RateEstimate scaled;
    double alpha = 2.0;
    double unit = 1.0;  // scenario units for the level grid {-1, 0, 1}
};

std::vector<FamilyCheck> acceptance_family_properties(const FamilyProbe& probe);

// t -> rho-dot_t on grid times in [0, T), piecewise linear, flat on the last
// segment up to the horizon.
class RateCurve {
public:
    RateCurve(std::vector<double> times, std::vector<double> values, double horizon);

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double horizon() const noexcept { return horizon_; }

    double operator()(double t) const;
    // Trapezoid integral of the curve over [from, to].
    double integral(double from, double to) const;

private:
    // integral from times_.front() to t; flat extension on both sides
    double primitive(double t) const;

    std::vector<double> times_;
    std::vector<double> values_;
    double horizon_;
    std::vector<double> cumulative_;
};

// g~(t, x, y, z, u) = g(t, x, y - int_t^T curve, z, u) + curve(t).
Driver resilience_neutral_driver(const Driver& base, RateCurve curve);

// int_t^T c_s rho-dot_s ds with c given on the curve's times.
double rra(const RateCurve& curve, std::span<const double> rescale, double t);

struct ExpansionReport {
    std::vector<double> offsets;      // t - s
    std::vector<double> increments;   // E[rho^c_t] - E[rho^c_s]
    std::vector<double> increment_se;
    double fitted_slope = 0.0;
    double slope_se = 0.0;
    double fitted_curvature = 0.0;
    double expected_slope = 0.0;  // (1 - c_s) rho-dot_s
    bool slope_ok = false;
};

// Regresses increments of the adjusted measure rho + RRA on (t - s) and (t - s)^2.
ExpansionReport adjusted_risk_expansion_check(const PathTable& risk_paths, const TimeGrid& grid,
                                              const RateCurve& curve,
                                              std::span<const double> rescale,
                                              std::size_t s_index,
                                              std::span<const std::size_t> offsets,
                                              double tolerance_se = 4.0);

}  // namespace reslab
