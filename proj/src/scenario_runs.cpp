#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "reslab/closed_forms.hpp"
#include "reslab/errors.hpp"
#include "reslab/estimators.hpp"
#include "reslab/hitting.hpp"
#include "reslab/noise.hpp"
#include "reslab/normal.hpp"
#include "reslab/parallel.hpp"
#include "reslab/paths.hpp"
#include "reslab/scenario.hpp"
#include "reslab/special_rates.hpp"

namespace reslab {

namespace {

// Paths are simulated and reduced in blocks to bound memory; path ids are
// global, so the block size does not change the sample.
constexpr std::size_t kBlock = 20000;

struct Block {
    SolutionSample solution;
    StoppingSample stopping;
};

struct Model {
    TimeGrid grid;
    Driver driver;
    std::function<Block(std::size_t first, std::size_t count)> build;
    std::function<double(double)> closed_form;
    std::optional<double> stopping_closed_form;
    bool stops = true;
    std::string state_label = "state";
};

struct MonteCarloRun {
    std::vector<std::size_t> indices;
    std::vector<RateRow> rows;
    std::vector<StoppingRow> stopping;
    std::vector<Check> checks;
    Table mean_path;
    std::optional<RateEstimate> stop_driver;
    std::optional<RateEstimate> stop_fd;
};

std::string describe(double a, double b, double se) {
    std::ostringstream os;
    os.precision(6);
    os << a << " vs " << b << " (se " << se << ")";
    return os.str();
}

bool within(double a, double b, double se, double k) {
    return std::abs(a - b) <= k * se + 1e-9 * (1.0 + std::abs(a) + std::abs(b));
}

std::vector<std::size_t> report_indices(const ScenarioConfig& c, const TimeGrid& grid,
                                        std::size_t max_offset) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0;; ++j) {
        const double t = static_cast<double>(j) * c.report_spacing * grid.horizon();
        if (t >= grid.horizon() * (1.0 - 1e-12)) break;
        const std::size_t k = grid.nearest_index(t);
        if (k + max_offset > grid.n_steps()) break;
        if (out.empty() || out.back() != k) out.push_back(k);
    }
    return out;
}

MonteCarloRun run_monte_carlo(const Model& model, const ScenarioConfig& c) {
    const TimeGrid& grid = model.grid;
    const auto eps = default_epsilons(grid);
    const std::size_t max_offset = static_cast<std::size_t>(std::round(eps.front() / grid.dt()));
    MonteCarloRun run;
    run.indices = report_indices(c, grid, max_offset);

    std::vector<DriverExpectationAccumulator> drv(run.indices.size());
    std::vector<FiniteDifferenceAccumulator> fd;
    for (std::size_t j = 0; j < run.indices.size(); ++j) fd.emplace_back(grid, eps);
    DriverExpectationAccumulator stop_drv;
    FiniteDifferenceAccumulator stop_fd(grid, eps);
    std::vector<SampleMoments> mean_rho(grid.size()), mean_state(grid.size());

    for (std::size_t first = 0; first < c.n_paths; first += kBlock) {
        const std::size_t count = std::min(kBlock, c.n_paths - first);
        const Block block = model.build(first, count);
        for (std::size_t j = 0; j < run.indices.size(); ++j) {
            const auto at = StoppingSample::at_index(grid, count, run.indices[j]);
            drv[j].add(model.driver, block.solution, grid, at);
            fd[j].add(block.solution.rho, at);
        }
        if (model.stops) {
            stop_drv.add(model.driver, block.solution, grid, block.stopping);
            stop_fd.add(block.solution.rho, block.stopping);
        }
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                mean_rho[k].add(block.solution.rho(i, k));
                if (!block.solution.state.empty()) mean_state[k].add(block.solution.state(i, k));
            }
        }
    }

    const double tol = 4.0 * c.tolerance_scale;
    for (std::size_t j = 0; j < run.indices.size(); ++j) {
        const double t = grid.time(run.indices[j]);
        const RateEstimate d = drv[j].result();
        const RateEstimate f = fd[j].result();
        RateRow row{t, std::nullopt, d.value, d.std_error, f.value, f.std_error};
        if (model.closed_form) {
            row.closed_form = model.closed_form(t);
            run.checks.push_back({"closed_vs_driver@t=" + format_number(t),
                                  within(d.value, *row.closed_form, d.std_error, tol),
                                  describe(d.value, *row.closed_form, d.std_error)});
        }
        const double se = combined_se(d.std_error, f.std_error);
        run.checks.push_back({"fd_vs_driver@t=" + format_number(t), within(f.value, d.value, se, tol),
                              describe(f.value, d.value, se)});
        run.rows.push_back(row);
    }

    if (model.stops) {
        try {
            run.stop_driver = stop_drv.result();
            run.stop_fd = stop_fd.result();
            const auto& d = *run.stop_driver;
            const auto& f = *run.stop_fd;
            run.stopping.push_back({"driver_expectation", d.value, d.std_error, d.hit_probability});
            run.stopping.push_back({"finite_difference", f.value, f.std_error, f.hit_probability});
            const double se = combined_se(d.std_error, f.std_error);
            run.checks.push_back({"fd_vs_driver@tau", within(f.value, d.value, se, tol),
                                  describe(f.value, d.value, se)});
            if (model.stopping_closed_form) {
                run.stopping.push_back(
                    {"closed_form", *model.stopping_closed_form, 0.0, d.hit_probability});
                run.checks.push_back({"closed_vs_driver@tau",
                                      within(d.value, *model.stopping_closed_form, d.std_error, tol),
                                      describe(d.value, *model.stopping_closed_form, d.std_error)});
            }
        } catch (const EstimationError& e) {
            run.stop_driver.reset();
            run.stop_fd.reset();
            run.checks.push_back({"stopping_time_estimable", false, e.what()});
        }
    }

    run.mean_path.file_name = "mean_path.csv";
    run.mean_path.header = {"t", "mean_" + model.state_label, "mean_rho"};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        run.mean_path.rows.push_back(
            {grid.time(k),
             mean_state[k].count ? std::optional<double>(mean_state[k].mean) : std::nullopt,
             mean_rho[k].mean});
    }
    return run;
}

ScenarioReport assemble(const ScenarioConfig& c, MonteCarloRun run, std::string plot_spec) {
    ScenarioReport rep;
    rep.config = c;
    rep.rates = std::move(run.rows);
    rep.stopping = std::move(run.stopping);
    rep.checks = std::move(run.checks);
    rep.tables.push_back(std::move(run.mean_path));
    rep.plot_spec = std::move(plot_spec);
    return rep;
}

std::string plot_spec_text(const ScenarioConfig& c, const std::string& rate_units,
                           const std::string& state_label) {
    std::ostringstream os;
    os << "scenario: " << to_string(c.id) << "\n"
       << "description: " << scenario_summary(c.id) << "\n\n"
       << "[plot rates]\nfile: rates.csv\nx: t (years)\ny: resilience rate (" << rate_units
       << ")\nseries: closed_form line; driver_mc points errorbar=driver_se; fd_mc points "
          "errorbar=fd_se\nmissing: NA\n\n"
       << "[plot mean_path]\nfile: mean_path.csv\nx: t (years)\ny: mean value\nseries: mean_"
       << state_label << " line; mean_rho line\n\n"
       << "[table stopping]\nfile: stopping.csv\ncolumns: method value se hit_prob\n";
    return os.str();
}

void fill_parallel(std::size_t n, const std::function<void(std::size_t)>& per_path) {
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) per_path(i);
    });
}

// ---- models -------------------------------------------------------------

Model fig1_model(const ScenarioConfig& c) {
    const TimeGrid grid(c.horizon, c.n_steps);
    const BSPutSpec spec{c.param("s0"), c.param("strike"), c.param("mu"), c.param("sigma"), c.horizon};
    Model m{grid, drivers::linear_brownian(spec.mu, spec.sigma), {}, {}, {}, true, "S"};
    const double threshold = *c.threshold;
    m.build = [=](std::size_t first, std::size_t count) {
        const auto noise = sample_noise(grid, count, 1, 0.0, c.seed, first);
        auto s = simulate_gbm(grid, spec.s0, spec.mu, spec.sigma, noise);
        Block b;
        b.solution.rho = PathTable(count, grid.size());
        b.solution.z = PathTable(count, grid.size());
        fill_parallel(count, [&](std::size_t i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double t = grid.time(k);
                const double x = s.values(i, k);
                b.solution.rho(i, k) = bs_put_price(spec, t, x);
                b.solution.z(i, k) = -spec.sigma * x * bs_put_short_delta(spec, t, x);
            }
        });
        b.solution.state = std::move(s.values);
        b.stopping = first_hitting(b.solution.rho, grid, threshold, Direction::at_or_above);
        return b;
    };
    m.closed_form = [spec](double t) { return bs_put_rate_t(spec, t); };
    return m;
}

Model vasicek_model(const ScenarioConfig& c, const VasicekBondSpec& spec, bool stops) {
    const TimeGrid grid(c.horizon, c.n_steps);
    Model m{grid, drivers::bond(), {}, {}, {}, stops, "r"};
    const double threshold = c.threshold.value_or(0.0);
    m.build = [=](std::size_t first, std::size_t count) {
        const auto noise = sample_noise(grid, count, 1, 0.0, c.seed, first);
        auto r = simulate_vasicek(grid, spec.r0, spec.a, spec.b, spec.sigma, noise);
        Block b;
        b.solution.rho = PathTable(count, grid.size());
        b.solution.z = PathTable(count, grid.size());
        std::vector<double> A(grid.size()), B(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            A[k] = vasicek_A(spec, grid.time(k));
            B[k] = vasicek_B(spec, grid.time(k));
        }
        fill_parallel(count, [&](std::size_t i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double p = std::exp(A[k] - B[k] * r.values(i, k));
                b.solution.rho(i, k) = p;
                b.solution.z(i, k) = -B[k] * spec.sigma * p;
            }
        });
        if (stops) b.stopping = first_hitting(r.values, grid, threshold, Direction::at_or_above);
        b.solution.state = std::move(r.values);
        return b;
    };
    m.closed_form = [spec](double t) { return vasicek_rate_t(spec, t); };
    return m;
}

Model appC1_model(const ScenarioConfig& c) {
    const TimeGrid grid(c.horizon, c.n_steps);
    ExpPayoffSpec spec{c.param("mu"), c.param("sigma"), c.horizon, std::nullopt};
    if (c.param("unit_scale") != 0.0) spec.scale = 1.0;
    Model m{grid, drivers::linear_brownian(spec.mu, spec.sigma), {}, {}, {}, true, "W"};
    const double threshold = *c.threshold;
    m.build = [=](std::size_t first, std::size_t count) {
        const auto noise = sample_noise(grid, count, 1, 0.0, c.seed, first);
        auto w = simulate_brownian(grid, 0.0, 1.0, noise);
        Block b;
        b.solution.rho = PathTable(count, grid.size());
        b.solution.z = PathTable(count, grid.size());
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double v = exp_payoff_value(spec, grid.time(k), w.values(i, k));
                b.solution.rho(i, k) = v;
                b.solution.z(i, k) = spec.sigma * v;
            }
        }
        b.solution.state = std::move(w.values);
        b.stopping = first_hitting(b.solution.rho, grid, threshold, Direction::at_or_above);
        return b;
    };
    m.closed_form = [spec](double t) { return exp_payoff_rate(spec, t); };
    return m;
}

// E_P[(K - S_T)+ | S_t = s] with physical drift mu, and its s-derivative.
struct PhysicalPut {
    double strike, mu, sigma, horizon;

    double value(double t, double s) const {
        const double tau = horizon - t;
        if (tau <= 0.0) return std::max(strike - s, 0.0);
        const double vol = sigma * std::sqrt(tau);
        const double fwd = s * std::exp(mu * tau);
        const double d_plus = (std::log(fwd / strike) + 0.5 * vol * vol) / vol;
        return strike * norm_cdf(-(d_plus - vol)) - fwd * norm_cdf(-d_plus);
    }
    double delta(double t, double s) const {
        const double tau = horizon - t;
        if (tau <= 0.0) return s < strike ? -1.0 : 0.0;
        const double vol = sigma * std::sqrt(tau);
        const double growth = std::exp(mu * tau);
        const double d_plus = (std::log(s * growth / strike) + 0.5 * vol * vol) / vol;
        return -growth * norm_cdf(-d_plus);
    }
};

struct Ex53Setup {
    PhysicalPut put;
    double s0, position, lower, upper;
    double rate() const { return position > 0 ? lower : upper; }
};

Model ex53_model(const ScenarioConfig& c, const Ex53Setup& setup) {
    const TimeGrid grid(c.horizon, c.n_steps);
    const double sigma = setup.put.sigma;
    Model m{grid,
            drivers::ambiguous_rates([r = setup.lower](double) { return r; },
                                     [R = setup.upper](double) { return R; }),
            {}, {}, {}, true, "S"};
    const double threshold = *c.threshold;
    m.build = [=](std::size_t first, std::size_t count) {
        const auto noise = sample_noise(grid, count, 1, 0.0, c.seed, first);
        auto s = simulate_gbm(grid, setup.s0, setup.put.mu, sigma, noise);
        Block b;
        b.solution.rho = PathTable(count, grid.size());
        b.solution.z = PathTable(count, grid.size());
        fill_parallel(count, [&](std::size_t i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double t = grid.time(k);
                const double x = s.values(i, k);
                const double disc = setup.position * std::exp(-setup.rate() * (c.horizon - t));
                b.solution.rho(i, k) = disc * setup.put.value(t, x);
                b.solution.z(i, k) = disc * sigma * x * setup.put.delta(t, x);
            }
        });
        b.solution.state = std::move(s.values);
        b.stopping = first_hitting(b.solution.rho, grid, threshold, Direction::at_or_above);
        return b;
    };
    const double mean_payoff = setup.put.value(0.0, setup.s0);
    m.closed_form = [=](double t) {
        return setup.position * setup.rate() * std::exp(-setup.rate() * (c.horizon - t)) * mean_payoff;
    };
    return m;
}

Model ex54_model(const ScenarioConfig& c, double gamma) {
    const TimeGrid grid(c.horizon, c.n_steps);
    const double scale = c.param("c");
    Model m{grid, drivers::entropic_brownian(gamma), {}, {}, {}, true, "W"};
    const double threshold = *c.threshold;
    m.build = [=](std::size_t first, std::size_t count) {
        const auto noise = sample_noise(grid, count, 1, 0.0, c.seed, first);
        auto w = simulate_brownian(grid, 0.0, 1.0, noise);
        Block b;
        b.solution.rho = PathTable(count, grid.size());
        b.solution.z = PathTable(count, grid.size(), scale);
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                b.solution.rho(i, k) = scale * w.values(i, k) +
                                       0.5 * gamma * scale * scale * (c.horizon - grid.time(k));
            }
        }
        b.solution.state = std::move(w.values);
        b.stopping = first_hitting(b.solution.rho, grid, threshold, Direction::at_or_above);
        return b;
    };
    const double exact = -0.5 * gamma * scale * scale;
    m.closed_form = [exact](double) { return exact; };
    m.stopping_closed_form = exact;
    return m;
}

Model ex55_model(const ScenarioConfig& c) {
    const TimeGrid grid(c.horizon, c.n_steps);
    const double s0 = c.param("s0"), mu = c.param("mu"), sigma = c.param("sigma");
    const double gamma = c.param("gamma"), lambda = c.param("jump_rate");
    Model m{grid, drivers::zero(), {}, {}, {}, true, "S"};
    const double threshold = *c.threshold;
    m.build = [=](std::size_t first, std::size_t count) {
        const auto noise = sample_noise(grid, count, 1, lambda, c.seed, first);
        auto s = simulate_jump_gbm(grid, s0, mu, sigma, gamma, noise);
        Block b;
        b.solution.rho = PathTable(count, grid.size());
        b.solution.z = PathTable(count, grid.size());
        b.solution.u = PathTable(count, grid.size());
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double v =
                    s.values(i, k) * std::exp((mu + lambda * gamma) * (c.horizon - grid.time(k)));
                b.solution.rho(i, k) = v;
                b.solution.z(i, k) = sigma * v;
                b.solution.u(i, k) = gamma * v;
            }
        }
        b.solution.state = std::move(s.values);
        b.stopping = first_hitting(b.solution.rho, grid, threshold, Direction::at_or_above);
        return b;
    };
    m.closed_form = [](double) { return 0.0; };
    m.stopping_closed_form = 0.0;
    return m;
}

JumpCallSpec ex56_spec(const ScenarioConfig& c) {
    return JumpCallSpec{c.param("s0"),    c.param("strike"),    c.param("mu"), c.param("sigma"),
                        c.param("gamma"), c.param("jump_rate"), c.horizon};
}

Model ex56_model(const ScenarioConfig& c) {
    const TimeGrid grid(c.horizon, c.n_steps);
    const JumpCallSpec spec = ex56_spec(c);
    Model m{grid, drivers::jump_market_linear(spec.mu, spec.sigma), {}, {}, {}, true, "S"};
    const double threshold = *c.threshold;
    m.build = [=](std::size_t first, std::size_t count) {
        const auto noise = sample_noise(grid, count, 1, spec.jump_rate, c.seed, first);
        auto s = simulate_jump_gbm(grid, spec.s0, spec.mu, spec.sigma, spec.gamma, noise);
        Block b;
        b.solution.rho = PathTable(count, grid.size());
        b.solution.z = PathTable(count, grid.size());
        std::vector<JumpCallPricer> pricers;
        for (std::size_t k = 0; k < grid.size(); ++k) pricers.emplace_back(spec, grid.time(k));
        fill_parallel(count, [&](std::size_t i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double x = s.values(i, k);
                const auto [price, delta] = pricers[k].price_and_delta(x);
                b.solution.rho(i, k) = price;
                b.solution.z(i, k) = spec.sigma * x * delta;
            }
        });
        b.solution.state = std::move(s.values);
        b.stopping = first_hitting(b.solution.rho, grid, threshold, Direction::at_or_above);
        return b;
    };
    m.closed_form = [spec](double t) { return jump_market_rate_series(spec, t).value; };
    return m;
}

EntropicJumpSpec ex37_spec(const ScenarioConfig& c) {
    const double beta = c.param("beta");
    const auto cap = static_cast<std::int64_t>(c.param("cap"));
    EntropicJumpSpec spec;
    spec.gamma = c.param("gamma");
    spec.jump_rate = c.param("jump_rate");
    spec.horizon = c.horizon;
    spec.payoff = [beta, cap](std::int64_t n) { return beta * static_cast<double>(std::min(n, cap)); };
    spec.saturation = cap;
    return spec;
}

Model ex37_model(const ScenarioConfig& c) {
    const TimeGrid grid(c.horizon, c.n_steps);
    const EntropicJumpSpec spec = ex37_spec(c);
    const auto model = std::make_shared<EntropicJumpModel>(spec);
    Model m{grid, drivers::entropic_jump(spec.gamma, spec.jump_rate), {}, {}, {}, true, "N"};
    const double threshold = *c.threshold;
    m.build = [=](std::size_t first, std::size_t count) {
        const auto noise = sample_noise(grid, count, 0, spec.jump_rate, c.seed, first);
        auto counts = cumulative_counts(noise);
        Block b;
        b.solution.z_dim = 0;
        b.solution.rho = PathTable(count, grid.size());
        b.solution.z = PathTable(count, 0);
        b.solution.u = PathTable(count, grid.size());
        // rho and its jump depend on (t_k, N_{t_k}) only: tabulate per grid point.
        std::int64_t top = 0;
        for (double v : counts.data()) top = std::max(top, static_cast<std::int64_t>(v));
        const auto width = static_cast<std::size_t>(top + 1);
        std::vector<double> value(grid.size() * width), jump(grid.size() * width);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            for (std::size_t n = 0; n < width; ++n) {
                value[k * width + n] = model->value(grid.time(k), static_cast<std::int64_t>(n));
                jump[k * width + n] = model->jump(grid.time(k), static_cast<std::int64_t>(n));
            }
        }
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const auto n = static_cast<std::size_t>(counts(i, k));
                b.solution.rho(i, k) = value[k * width + n];
                b.solution.u(i, k) = jump[k * width + n];
            }
        }
        b.solution.state = std::move(counts);
        b.stopping = first_hitting(b.solution.rho, grid, threshold, Direction::at_or_above);
        return b;
    };
    m.closed_form = [spec](double t) { return entropic_rate_jump(spec, t).driver_form.value; };
    return m;
}

}  // namespace

ScenarioReport run_fig1(const ScenarioConfig& c) {
    validate(c);
    if (c.id != ScenarioId::fig1_put) throw ConfigError("run_fig1 needs a fig1_put config");
    auto run = run_monte_carlo(fig1_model(c), c);
    constexpr double kReference = -78.0;
    if (run.stop_driver) {
        const double v = run.stop_driver->value;
        run.checks.push_back({"reference_band@tau",
                              std::abs(v - kReference) <= 0.05 * std::abs(kReference) * c.tolerance_scale,
                              describe(v, kReference, 0.05 * std::abs(kReference))});
    }
    return assemble(c, std::move(run), plot_spec_text(c, "EUR per year", "S"));
}

ScenarioReport run_fig2(const ScenarioConfig& c) {
    validate(c);
    if (c.id != ScenarioId::fig2_vasicek) throw ConfigError("run_fig2 needs a fig2_vasicek config");
    const VasicekBondSpec spec{c.param("r0"), c.param("a"), c.param("b"), c.param("sigma"), c.horizon};
    auto run = run_monte_carlo(vasicek_model(c, spec, true), c);
    constexpr double kReference = 0.050;
    if (run.stop_driver) {
        const double v = run.stop_driver->value;
        run.checks.push_back({"reference_band@tau",
                              std::abs(v - kReference) <= 0.10 * kReference * c.tolerance_scale,
                              describe(v, kReference, 0.10 * kReference)});
    }
    const double near_end = vasicek_rate_t(spec, c.horizon * (1.0 - 1e-7));
    const double mean_end = vasicek_mean(spec, c.horizon);
    run.checks.push_back({"closed_form_endpoint_mean_rate", std::abs(near_end - mean_end) < 1e-6,
                          describe(near_end, mean_end, 0.0)});
    return assemble(c, std::move(run), plot_spec_text(c, "per year", "r"));
}

ScenarioReport run_appD_sweep(const ScenarioConfig& c) {
    validate(c);
    if (c.id != ScenarioId::appD_sweep) throw ConfigError("run_appD_sweep needs an appD_sweep config");
    ScenarioReport rep;
    rep.config = c;
    Table sweep{"sweep.csv", {"a", "t", "closed_form", "driver_mc", "driver_se", "fd_mc", "fd_se"}, {}};
    // per a: rate rows at the report times
    std::vector<std::vector<RateRow>> curves;
    for (std::size_t ia = 0; ia < c.sweep.size(); ++ia) {
        const double a = c.sweep[ia];
        const VasicekBondSpec spec{c.param("r0"), a, c.param("b"), c.param("sigma"), c.horizon};
        auto run = run_monte_carlo(vasicek_model(c, spec, false), c);
        for (auto& chk : run.checks) chk.name = "a=" + format_number(a) + ":" + chk.name;
        rep.checks.insert(rep.checks.end(), run.checks.begin(), run.checks.end());
        for (const auto& r : run.rows) {
            sweep.rows.push_back({a, r.t, r.closed_form, r.driver_mc, r.driver_se, r.fd_mc, r.fd_se});
        }
        if (ia == 0) {
            rep.rates = run.rows;
            rep.tables.push_back(std::move(run.mean_path));
        }
        curves.push_back(std::move(run.rows));
    }
    rep.tables.push_back(std::move(sweep));

    // |rate| nondecreasing in a, closed form and MC (1 SE slack per adjacent pair)
    Table mono{"monotonicity.csv", {"t", "closed_form_monotone", "mc_monotone"}, {}};
    if (curves.size() > 1) {
        for (double t_probe : {0.0, 0.25, 0.5, 0.75}) {
            const std::size_t j = static_cast<std::size_t>(
                std::min_element(curves[0].begin(), curves[0].end(),
                                 [&](const RateRow& x, const RateRow& y) {
                                     return std::abs(x.t - t_probe) < std::abs(y.t - t_probe);
                                 }) -
                curves[0].begin());
            bool closed_ok = true, mc_ok = true;
            for (std::size_t ia = 1; ia < curves.size(); ++ia) {
                const auto& prev = curves[ia - 1][j];
                const auto& cur = curves[ia][j];
                if (std::abs(*cur.closed_form) < std::abs(*prev.closed_form) - 1e-15) closed_ok = false;
                const double slack = combined_se(*cur.driver_se, *prev.driver_se);
                if (std::abs(*cur.driver_mc) < std::abs(*prev.driver_mc) - slack - 1e-15) mc_ok = false;
            }
            const double t = curves[0][j].t;
            mono.rows.push_back({t, closed_ok ? 1.0 : 0.0, mc_ok ? 1.0 : 0.0});
            rep.checks.push_back({"abs_rate_nondecreasing_in_a@t=" + format_number(t),
                                  closed_ok && mc_ok,
                                  std::string("closed form ") + (closed_ok ? "monotone" : "not monotone") +
                                      ", mc " + (mc_ok ? "monotone" : "not monotone")});
        }
    }
    rep.tables.push_back(std::move(mono));
    std::ostringstream os;
    os << plot_spec_text(c, "per year", "r")
       << "\n[plot sweep]\nfile: sweep.csv\nx: t (years)\ny: resilience rate (per year)\n"
          "group: a\nseries: closed_form line; driver_mc points errorbar=driver_se\n";
    rep.plot_spec = os.str();
    return rep;
}

ScenarioReport run_example(const ScenarioConfig& c) {
    validate(c);
    switch (c.id) {
        case ScenarioId::appC1_exp_payoff: {
            auto run = run_monte_carlo(appC1_model(c), c);
            return assemble(c, std::move(run), plot_spec_text(c, "per year", "W"));
        }
        case ScenarioId::ex53_ambiguous: {
            const Ex53Setup setup{
                PhysicalPut{c.param("strike"), c.param("mu"), c.param("sigma"), c.horizon},
                c.param("s0"), c.param("position"), c.param("lower_rate"), c.param("upper_rate")};
            auto model = ex53_model(c, setup);
            auto run = run_monte_carlo(model, c);
            // terminal-claim formula over simulated payoffs
            const TimeGrid& grid = model.grid;
            const std::size_t n = std::min<std::size_t>(c.n_paths, kBlock);
            const auto noise = sample_noise(grid, n, 1, 0.0, c.seed, 0);
            const auto s = simulate_gbm(grid, setup.s0, setup.put.mu, setup.put.sigma, noise);
            std::vector<double> payoff(n);
            for (std::size_t i = 0; i < n; ++i) {
                payoff[i] = setup.position * std::max(setup.put.strike - s.values(i, grid.n_steps()), 0.0);
            }
            const RateBand band = RateBand::constant(setup.lower, setup.upper);
            Table formula{"terminal_formula.csv", {"t", "closed_form", "formula_mc", "formula_se"}, {}};
            for (const auto& row : run.rows) {
                const auto ar = ambiguous_rate_value_and_rate(band, payoff, row.t, c.horizon);
                formula.rows.push_back({row.t, row.closed_form, ar.rate.value, ar.rate.std_error});
                run.checks.push_back({"terminal_formula_vs_closed@t=" + format_number(row.t),
                                      within(ar.rate.value, *row.closed_form, ar.rate.std_error,
                                             4.0 * c.tolerance_scale),
                                      describe(ar.rate.value, *row.closed_form, ar.rate.std_error)});
            }
            auto rep = assemble(c, std::move(run), plot_spec_text(c, "EUR per year", "S"));
            rep.tables.push_back(std::move(formula));
            return rep;
        }
        case ScenarioId::ex54_entropic_brownian: {
            auto run = run_monte_carlo(ex54_model(c, c.param("gamma")), c);
            Table sweep{"sweep.csv",
                        {"gamma", "closed_form", "stop_driver", "stop_driver_se", "stop_fd", "stop_fd_se",
                         "fd_t0", "fd_t0_se"},
                        {}};
            std::vector<double> stop_values;
            std::vector<Check> extra;
            for (double g : c.sweep) {
                auto sub = run_monte_carlo(ex54_model(c, g), c);
                const double exact = -0.5 * g * c.param("c") * c.param("c");
                std::vector<std::optional<double>> row{g, exact};
                if (sub.stop_driver) {
                    row.insert(row.end(), {sub.stop_driver->value, sub.stop_driver->std_error,
                                           sub.stop_fd->value, sub.stop_fd->std_error});
                    stop_values.push_back(sub.stop_driver->value);
                } else {
                    row.insert(row.end(), {std::nullopt, std::nullopt, std::nullopt, std::nullopt});
                }
                row.insert(row.end(), {sub.rows.front().fd_mc, sub.rows.front().fd_se});
                sweep.rows.push_back(row);
                for (auto& chk : sub.checks) {
                    chk.name = "gamma=" + format_number(g) + ":" + chk.name;
                    extra.push_back(chk);
                }
            }
            bool decreasing = stop_values.size() == c.sweep.size();
            for (std::size_t i = 1; decreasing && i < stop_values.size(); ++i) {
                const bool order = c.sweep[i] > c.sweep[i - 1] ? stop_values[i] < stop_values[i - 1]
                                                               : stop_values[i] > stop_values[i - 1];
                decreasing = order;
            }
            run.checks.insert(run.checks.end(), extra.begin(), extra.end());
            run.checks.push_back({"rate_more_negative_in_gamma", decreasing,
                                  "stopping-time driver rates across the gamma sweep"});
            auto rep = assemble(c, std::move(run), plot_spec_text(c, "per year", "W"));
            rep.tables.push_back(std::move(sweep));
            return rep;
        }
        case ScenarioId::ex55_martingale: {
            auto run = run_monte_carlo(ex55_model(c), c);
            return assemble(c, std::move(run), plot_spec_text(c, "EUR per year", "S"));
        }
        case ScenarioId::ex56_jump_call: {
            auto run = run_monte_carlo(ex56_model(c), c);
            const JumpCallSpec spec = ex56_spec(c);
            Table direct{"expectation_formula.csv", {"t", "series", "mc", "mc_se"}, {}};
            for (const auto& row : run.rows) {
                const auto jm = jump_market_rate(spec, row.t, c.n_paths, c.seed);
                direct.rows.push_back({row.t, jm.series.value, jm.monte_carlo.value,
                                       jm.monte_carlo.std_error});
                run.checks.push_back({"expectation_mc_vs_series@t=" + format_number(row.t),
                                      within(jm.monte_carlo.value, jm.series.value,
                                             jm.monte_carlo.std_error, 4.0 * c.tolerance_scale),
                                      describe(jm.monte_carlo.value, jm.series.value,
                                               jm.monte_carlo.std_error)});
            }
            auto rep = assemble(c, std::move(run), plot_spec_text(c, "EUR per year", "S"));
            rep.tables.push_back(std::move(direct));
            return rep;
        }
        case ScenarioId::ex37_entropic_jump: {
            auto run = run_monte_carlo(ex37_model(c), c);
            const EntropicJumpSpec spec = ex37_spec(c);
            Table reps{"representations.csv", {"t", "martingale_form", "driver_form", "relative_gap"}, {}};
            bool all_close = true;
            double worst = 0.0;
            for (const auto& row : run.rows) {
                const auto both = entropic_rate_jump(spec, row.t);
                const double a = both.martingale_form.value, b = both.driver_form.value;
                const double gap = std::abs(a - b) / std::max(std::abs(a), 1e-300);
                worst = std::max(worst, gap);
                all_close = all_close && gap <= 1e-6;
                reps.rows.push_back({row.t, a, b, gap});
            }
            run.checks.push_back({"representations_agree_1e-6", all_close,
                                  "worst relative gap " + format_number(worst)});
            auto rep = assemble(c, std::move(run), plot_spec_text(c, "per year", "N"));
            rep.tables.push_back(std::move(reps));
            return rep;
        }
        case ScenarioId::fig1_put: return run_fig1(c);
        case ScenarioId::fig2_vasicek: return run_fig2(c);
        case ScenarioId::appD_sweep: return run_appD_sweep(c);
    }
    throw ConfigError("unknown scenario");
}

}  // namespace reslab
