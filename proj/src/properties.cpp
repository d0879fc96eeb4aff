#include "reslab/properties.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "reslab/closed_forms.hpp"
#include "reslab/config.hpp"
#include "reslab/errors.hpp"
#include "reslab/estimators.hpp"
#include "reslab/hitting.hpp"
#include "reslab/lsmc.hpp"
#include "reslab/noise.hpp"
#include "reslab/normal.hpp"
#include "reslab/paths.hpp"
#include "reslab/rng.hpp"
#include "reslab/scenario.hpp"
#include "reslab/toolkit.hpp"

namespace reslab {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Probabilists' Gauss-Hermite rule (weight = standard normal density) by
// Golub-Welsch.
struct Quadrature {
    std::vector<double> nodes, weights;
};

Quadrature gauss_hermite(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(static_cast<double>(i));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    Quadrature q;
    for (int i = 0; i < n; ++i) {
        q.nodes.push_back(eig.eigenvalues()(i));
        const double v = eig.eigenvectors()(0, i);
        q.weights.push_back(v * v);
    }
    return q;
}

struct PutSetup {
    BSPutSpec spec{1000.0, 1000.0, 0.10, 0.10, 1.0};
    TimeGrid grid;
    StatePaths s;
    SolutionSample solution;
    std::vector<double> payoff;
};

PutSetup put_setup(const SuiteOptions& o) {
    PutSetup p{{}, TimeGrid(1.0, o.n_steps), {}, {}, {}};
    const auto noise = sample_noise(p.grid, o.n_paths, 1, 0.0, o.seed);
    p.s = simulate_gbm(p.grid, p.spec.s0, p.spec.mu, p.spec.sigma, noise);
    p.solution.rho = PathTable(o.n_paths, p.grid.size());
    p.solution.z = PathTable(o.n_paths, p.grid.size());
    for (std::size_t i = 0; i < o.n_paths; ++i) {
        for (std::size_t k = 0; k < p.grid.size(); ++k) {
            const double t = p.grid.time(k), x = p.s.values(i, k);
            p.solution.rho(i, k) = bs_put_price(p.spec, t, x);
            p.solution.z(i, k) = -p.spec.sigma * x * bs_put_short_delta(p.spec, t, x);
        }
        p.payoff.push_back(std::max(p.spec.strike - p.s.values(i, p.grid.n_steps()), 0.0));
    }
    p.solution.state = p.s.values;
    return p;
}

SolutionSample transformed(const SolutionSample& base, double scale, double shift) {
    SolutionSample out = base;
    for (std::size_t i = 0; i < out.rho.n_paths(); ++i) {
        for (std::size_t k = 0; k < out.rho.n_points(); ++k) {
            out.rho(i, k) = scale * base.rho(i, k) + shift;
            out.z(i, k) = scale * base.z(i, k);
        }
    }
    return out;
}

std::vector<std::size_t> probe_indices(const TimeGrid& grid) {
    return {0, grid.n_steps() / 4, grid.n_steps() / 2, (3 * grid.n_steps()) / 4};
}

PropertyResult cash_insensitivity(const PutSetup& p, RateEstimate* base_out, RateEstimate* shifted_out) {
    const Driver g = drivers::linear_brownian(p.spec.mu, p.spec.sigma);
    const double h = 250.0;
    const auto shifted = transformed(p.solution, 1.0, h);
    const auto eps = default_epsilons(p.grid);
    double worst_drv = 0.0, worst_fd = 0.0;
    for (std::size_t k : probe_indices(p.grid)) {
        const auto a = rate_driver_expectation(g, p.solution, p.grid, k);
        const auto b = rate_driver_expectation(g, shifted, p.grid, k);
        worst_drv = std::max(worst_drv, std::abs(a.value - b.value));
        const auto fa = rate_finite_difference(p.solution.rho, p.grid, k, eps);
        const auto fb = rate_finite_difference(shifted.rho, p.grid, k, eps);
        worst_fd = std::max(worst_fd, std::abs(fa.value - fb.value) / std::max(1.0, std::abs(fa.value)));
        if (k == p.grid.n_steps() / 2) {
            *base_out = a;
            *shifted_out = b;
        }
    }
    return {"cash_insensitivity", worst_drv == 0.0 && worst_fd < 1e-9,
            "max |driver diff| " + num(worst_drv) + ", max rel fd diff " + num(worst_fd)};
}

PropertyResult positive_homogeneity(const PutSetup& p, RateEstimate* scaled_out) {
    const Driver g = drivers::linear_brownian(p.spec.mu, p.spec.sigma);
    double worst = 0.0;
    for (double alpha : {0.0, 0.5, 2.0}) {
        const auto scaled = transformed(p.solution, alpha, 0.0);
        for (std::size_t k : probe_indices(p.grid)) {
            const auto a = rate_driver_expectation(g, p.solution, p.grid, k);
            const auto b = rate_driver_expectation(g, scaled, p.grid, k);
            worst = std::max(worst, std::abs(b.value - alpha * a.value) / std::max(1.0, std::abs(a.value)));
            if (alpha == 2.0 && k == p.grid.n_steps() / 2) *scaled_out = b;
        }
    }
    return {"positive_homogeneity", worst < 1e-12, "max rel deviation " + num(worst)};
}

// The claim rho_s(X) re-priced by quadrature at t <= s must carry the same
// rate as X itself.
PropertyResult time_consistency(const PutSetup& p) {
    const Driver g = drivers::linear_brownian(p.spec.mu, p.spec.sigma);
    const auto gh = gauss_hermite(64);
    const std::size_t s_index = p.grid.n_steps() / 2;
    const double s_time = p.grid.time(s_index);
    const std::size_t n = p.solution.n_paths();
    SolutionSample nested;
    nested.rho = PathTable(n, p.grid.size());
    nested.z = PathTable(n, p.grid.size());
    const std::vector<std::size_t> ks = {0, s_index / 4, s_index / 2, s_index};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k : ks) {
            const double t = p.grid.time(k), x = p.s.values(i, k);
            const double vol = p.spec.sigma * std::sqrt(s_time - t);
            double value = 0.0, z = 0.0;
            if (vol == 0.0) {
                value = bs_put_price(p.spec, s_time, x);
                z = -p.spec.sigma * x * bs_put_short_delta(p.spec, s_time, x);
            } else {
                for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
                    const double xs = x * std::exp(-0.5 * vol * vol + vol * gh.nodes[j]);
                    value += gh.weights[j] * bs_put_price(p.spec, s_time, xs);
                    z += gh.weights[j] * -p.spec.sigma * xs * bs_put_short_delta(p.spec, s_time, xs);
                }
            }
            nested.rho(i, k) = value;
            nested.z(i, k) = z;
        }
    }
    double worst = 0.0, worst_value = 0.0;
    for (std::size_t k : ks) {
        const auto a = rate_driver_expectation(g, p.solution, p.grid, k);
        const auto b = rate_driver_expectation(g, nested, p.grid, k);
        worst = std::max(worst, std::abs(a.value - b.value) / std::max(1.0, std::abs(a.value)));
        for (std::size_t i = 0; i < n; i += 97) {
            worst_value = std::max(worst_value, std::abs(nested.rho(i, k) - p.solution.rho(i, k)) /
                                                    std::max(1.0, p.solution.rho(i, k)));
        }
    }
    return {"time_consistency", worst < 1e-8 && worst_value < 1e-8,
            "max rel rate gap " + num(worst) + ", max rel value gap " + num(worst_value)};
}

PropertyResult comparison(const SuiteOptions& o) {
    const TimeGrid grid(1.0, o.n_steps);
    const double mu = 0.05, sigma = 0.2, kappa = 0.3, s0 = 1.0, extra = 0.5;
    const auto noise = sample_noise(grid, o.n_paths, 1, 0.0, o.seed + 1);
    const auto s = simulate_gbm(grid, s0, mu, sigma, noise);
    const Driver g = drivers::linear_in_y(kappa);
    SolutionSample lo, hi;
    lo.rho = hi.rho = PathTable(o.n_paths, grid.size());
    lo.z = hi.z = PathTable(o.n_paths, grid.size());
    for (std::size_t i = 0; i < o.n_paths; ++i) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double tau = grid.horizon() - grid.time(k);
            const double v = std::exp(kappa * tau) * s.values(i, k) * std::exp(mu * tau);
            lo.rho(i, k) = v;
            hi.rho(i, k) = v + std::exp(kappa * tau) * extra;
            lo.z(i, k) = sigma * v;
            hi.z(i, k) = sigma * v;
        }
    }
    bool ordered = true, closed_ok = true;
    double worst_z = 0.0;
    for (std::size_t k = 0; k < grid.n_steps(); ++k) {
        const auto r_hi = rate_driver_expectation(g, hi, grid, k);
        const auto r_lo = rate_driver_expectation(g, lo, grid, k);
        if (!(r_hi.value <= r_lo.value)) ordered = false;
        const double tau = grid.horizon() - grid.time(k);
        const double exact = -kappa * std::exp(kappa * tau) * (s0 * std::exp(mu * grid.horizon()) + extra);
        const double zscore = r_hi.std_error > 0 ? std::abs(r_hi.value - exact) / r_hi.std_error
                                                 : std::abs(r_hi.value - exact) / 1e-12;
        worst_z = std::max(worst_z, zscore);
        if (!(zscore <= 4.0 * o.tolerance_scale) && !close_rel(r_hi.value, exact, 1e-10)) closed_ok = false;
    }
    return {"comparison", ordered && closed_ok,
            std::string(ordered ? "ordered" : "order violated") + ", worst |z| vs closed form " + num(worst_z)};
}

PropertyResult concavity(const SuiteOptions& o) {
    const TimeGrid grid(1.0, std::min<std::size_t>(o.n_steps, 50));
    const double mu = 0.05, sigma = 0.2, strike = 1.0;
    const auto noise = sample_noise(grid, o.n_paths, 1, 0.0, o.seed + 2);
    const auto s = simulate_gbm(grid, 1.0, mu, sigma, noise);
    const Driver g = drivers::positive_part();
    std::vector<double> put(o.n_paths), call(o.n_paths);
    for (std::size_t i = 0; i < o.n_paths; ++i) {
        const double st = s.values(i, grid.n_steps());
        put[i] = std::max(strike - st, 0.0);
        call[i] = std::max(st - strike, 0.0);
    }
    const std::size_t k = grid.n_steps() / 2;
    auto rate_of = [&](const std::vector<double>& x) {
        const auto sol = lsmc_solve(g, x, s, noise, grid);
        return rate_driver_expectation(g, sol.sample, grid, k);
    };
    const auto r1 = rate_of(put);
    const auto r2 = rate_of(call);
    bool ok = true;
    double worst = -1e300;
    for (double lambda : {0.25, 0.5, 0.75}) {
        std::vector<double> mix(o.n_paths);
        for (std::size_t i = 0; i < o.n_paths; ++i) mix[i] = lambda * put[i] + (1 - lambda) * call[i];
        const auto rm = rate_of(mix);
        const double lhs = lambda * r1.value + (1 - lambda) * r2.value;
        const double se = combined_se(combined_se(lambda * r1.std_error, (1 - lambda) * r2.std_error), rm.std_error);
        worst = std::max(worst, (lhs - rm.value) / std::max(se, 1e-300));
        if (!(lhs <= rm.value + 4.0 * o.tolerance_scale * se)) ok = false;
    }
    return {"concavity", ok, "max (mix of rates - rate of mix)/se " + num(worst)};
}

// g_n = -(mu_n/sigma) z with mu_n -> mu and X_n = (1 + d_n) S_T -> S_T.
PropertyResult l2_stability(const SuiteOptions& o) {
    const TimeGrid grid(1.0, o.n_steps);
    const double mu = 0.08, sigma = 0.2;
    const auto noise = sample_noise(grid, o.n_paths, 1, 0.0, o.seed + 3);
    const auto s = simulate_gbm(grid, 1.0, mu, sigma, noise);
    auto curve = [&](double mu_n, double d_n) {
        const Driver g = drivers::linear_brownian(mu_n, sigma);
        SolutionSample sol;
        sol.rho = PathTable(o.n_paths, grid.size());
        sol.z = PathTable(o.n_paths, grid.size());
        for (std::size_t i = 0; i < o.n_paths; ++i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double v = (1 + d_n) * s.values(i, k) * std::exp((mu - mu_n) * (grid.horizon() - grid.time(k)));
                sol.rho(i, k) = v;
                sol.z(i, k) = sigma * v;
            }
        }
        std::vector<double> out;
        for (std::size_t k = 0; k < grid.n_steps(); ++k) {
            out.push_back(rate_driver_expectation(g, sol, grid, k).value);
        }
        return out;
    };
    const auto limit = curve(mu, 0.0);
    std::vector<double> dist;
    for (int n = 1; n <= 4; ++n) {
        const double shrink = std::ldexp(1.0, -n);
        const auto c = curve(mu * (1 + 0.5 * shrink), 0.2 * shrink);
        double acc = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) acc += (c[k] - limit[k]) * (c[k] - limit[k]);
        dist.push_back(std::sqrt(acc * grid.dt()));
    }
    bool ok = true;
    for (std::size_t i = 1; i < dist.size(); ++i) ok = ok && dist[i] < dist[i - 1];
    std::string detail = "L2 distances";
    for (double d : dist) detail += " " + num(d);
    return {"l2_stability", ok, detail};
}

PropertyResult acceptance_round_trips(const PutSetup& p, const RateEstimate& base,
                                      const RateEstimate& shifted, const RateEstimate& scaled) {
    bool ok = true;
    std::string detail;
    // minimum level is accepted, 3 SE below is not
    const double level = min_acceptance_level(base);
    const double t = *base.time;
    ok = ok && is_acceptable(base, {AcceptanceLevel::finite(level), t}).accepted;
    ok = ok && !is_acceptable(base, {AcceptanceLevel::finite(level - 3.0 * base.std_error), t}).accepted;
    ok = ok && is_acceptable(base, {AcceptanceLevel::plus_infinity(), t}).accepted;
    ok = ok && !is_acceptable(base, {AcceptanceLevel::minus_infinity(), t}).accepted;
    if (!ok) detail += "level round trip failed; ";

    FamilyProbe probe{drivers::linear_brownian(p.spec.mu, p.spec.sigma).flags(), base, shifted, scaled, 2.0,
                      std::max(1.0, std::abs(base.value))};
    for (const auto& c : acceptance_family_properties(probe)) {
        if (c.applicable && !c.passed) {
            ok = false;
            detail += c.property + " fails at a=" + num(c.level) + "; ";
        }
    }
    // zero driver: a >= 0 accepts, a < 0 rejects
    const auto zero = RateEstimate::exact(0.0, t);
    for (double a : {-1.0, 0.0, 1.0}) {
        if (is_acceptable(zero, {AcceptanceLevel::finite(a), t}).accepted != (a >= 0.0)) {
            ok = false;
            detail += "zero driver wrong at a=" + num(a) + "; ";
        }
    }
    if (detail.empty()) detail = "min level " + num(level) + " at t=" + num(t);
    return {"acceptance_round_trips", ok, detail};
}

template <class Fn>
PropertyResult guarded(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {name, false, std::string("threw: ") + e.what()};
    }
}

template <class Ex, class Fn>
bool throws(Fn&& fn) {
    try {
        fn();
    } catch (const Ex&) {
        return true;
    } catch (...) {
        return false;
    }
    return false;
}

}  // namespace

std::vector<PropertyResult> run_property_suite(const SuiteOptions& o) {
    std::vector<PropertyResult> out;
    const PutSetup p = put_setup(o);
    RateEstimate base, shifted, scaled;
    out.push_back(guarded("cash_insensitivity", [&] { return cash_insensitivity(p, &base, &shifted); }));
    out.push_back(guarded("positive_homogeneity", [&] { return positive_homogeneity(p, &scaled); }));
    out.push_back(guarded("time_consistency", [&] { return time_consistency(p); }));
    out.push_back(guarded("comparison", [&] { return comparison(o); }));
    out.push_back(guarded("concavity", [&] { return concavity(o); }));
    out.push_back(guarded("l2_stability", [&] { return l2_stability(o); }));
    out.push_back(guarded("acceptance_round_trips",
                          [&] { return acceptance_round_trips(p, base, shifted, scaled); }));
    return out;
}

std::vector<PropertyResult> run_selftest(const SuiteOptions& o) {
    std::vector<PropertyResult> out;
    auto add = [&](std::string name, auto fn) {
        out.push_back(guarded(name, [&]() -> PropertyResult {
            const auto [ok, detail] = fn();
            return {name, ok, detail};
        }));
    };
    using Result = std::pair<bool, std::string>;

    add("rng_known_answer", []() -> Result {
        const auto r = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
        const bool ok = r == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
        return {ok, ok ? "philox zero vector matches" : "philox zero vector mismatch"};
    });
    add("grid_rejects_bad_input", []() -> Result {
        const bool ok = throws<ConfigError>([] { TimeGrid(0.0, 10); }) &&
                        throws<ConfigError>([] { TimeGrid(1.0, 0); });
        const TimeGrid g(1.0, 10);
        return {ok && std::abs(g.dt() - 0.1) < 1e-15, "T<=0 and zero steps rejected, dt=" + num(g.dt())};
    });
    add("normal_cdf_symmetry", []() -> Result {
        return {norm_cdf(0.0) == 0.5 && std::abs(norm_quantile(0.975) - 1.959963984540054) < 1e-12, "N(0)=0.5"};
    });
    add("zero_driver_rate", [&]() -> Result {
        const TimeGrid g(1.0, 10);
        SolutionSample sol;
        sol.rho = PathTable(8, g.size(), 3.0);
        sol.z = PathTable(8, g.size());
        const auto r = rate_driver_expectation(drivers::zero(), sol, g, 0);
        const auto f = rate_finite_difference(sol.rho, g, 0, default_epsilons(g));
        return {r.value == 0.0 && f.value == 0.0, "driver " + num(r.value) + ", fd " + num(f.value)};
    });
    add("acceptance_trivial", []() -> Result {
        const auto zero = RateEstimate::exact(0.0, 0.0);
        const auto d = is_acceptable(zero, {AcceptanceLevel::finite(0.0), 0.0});
        return {d.accepted && min_acceptance_level(zero) == 0.0, "zero rate accepted at a=0"};
    });
    add("config_empty_names_scenario_id", []() -> Result {
        try {
            parse_config("");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            return {msg.find("scenario_id") != std::string::npos, msg};
        }
        return {false, "no error"};
    });
    add("config_round_trip", []() -> Result {
        for (auto id : all_scenarios()) {
            const auto c = default_config(id);
            if (!(parse_config(write_config(c)) == c)) return {false, std::string(to_string(id))};
        }
        return {true, "all defaults"};
    });
    add("vasicek_degenerate_sigma", []() -> Result {
        const VasicekBondSpec spec{0.02, 1.0, 0.02, 0.0, 1.0};
        const double p = vasicek_bond_price(spec, 0.0, 0.02);
        return {close_rel(p, std::exp(-0.02), 1e-12), "flat rate bond " + num(p)};
    });
    add("put_rate_closed_form_finite", []() -> Result {
        const double r = bs_put_rate_t(BSPutSpec{}, 0.0);
        return {std::isfinite(r) && r < 0.0, "rate at 0: " + num(r)};
    });
    add("scenario_smoke", [&]() -> Result {
        auto c = default_config(ScenarioId::ex54_entropic_brownian);
        c.n_paths = std::min<std::size_t>(o.n_paths, 4000);
        c.n_steps = 50;
        c.seed = o.seed;
        c.sweep = {1.0};
        c.tolerance_scale = std::max(1.0, o.tolerance_scale);
        const auto rep = run_scenario(c);
        const auto* row = rep.rate_row_near(0.0);
        return {row && row->driver_mc && close_rel(*row->driver_mc, -0.02, 1e-12),
                "ex54 driver rate at 0: " + (row && row->driver_mc ? num(*row->driver_mc) : "NA")};
    });
    return out;
}

}  // namespace reslab
