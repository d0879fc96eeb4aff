#include "reslab/scenario.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "reslab/config.hpp"
#include "reslab/errors.hpp"

namespace reslab {

namespace {

constexpr std::array<ScenarioId, 9> kAll = {
    ScenarioId::fig1_put,          ScenarioId::fig2_vasicek,
    ScenarioId::appC1_exp_payoff,  ScenarioId::appD_sweep,
    ScenarioId::ex53_ambiguous,    ScenarioId::ex54_entropic_brownian,
    ScenarioId::ex55_martingale,   ScenarioId::ex56_jump_call,
    ScenarioId::ex37_entropic_jump,
};

}  // namespace

std::string_view to_string(ScenarioId id) noexcept {
    switch (id) {
        case ScenarioId::fig1_put: return "fig1_put";
        case ScenarioId::fig2_vasicek: return "fig2_vasicek";
        case ScenarioId::appC1_exp_payoff: return "appC1_exp_payoff";
        case ScenarioId::appD_sweep: return "appD_sweep";
        case ScenarioId::ex53_ambiguous: return "ex53_ambiguous";
        case ScenarioId::ex54_entropic_brownian: return "ex54_entropic_brownian";
        case ScenarioId::ex55_martingale: return "ex55_martingale";
        case ScenarioId::ex56_jump_call: return "ex56_jump_call";
        case ScenarioId::ex37_entropic_jump: return "ex37_entropic_jump";
    }
    return "unknown";
}

std::optional<ScenarioId> parse_scenario_id(std::string_view name) noexcept {
    for (auto id : kAll) {
        if (to_string(id) == name) return id;
    }
    return std::nullopt;
}

std::span<const ScenarioId> all_scenarios() noexcept { return kAll; }

std::string_view scenario_summary(ScenarioId id) noexcept {
    switch (id) {
        case ScenarioId::fig1_put: return "short put on GBM, linear driver, stop when the put value reaches c";
        case ScenarioId::fig2_vasicek: return "zero-coupon bond under Vasicek, stop when the short rate reaches c";
        case ScenarioId::appC1_exp_payoff: return "exponential payoff, linear driver";
        case ScenarioId::appD_sweep: return "bond rate curves across mean-reversion speeds";
        case ScenarioId::ex53_ambiguous: return "lending/borrowing rate band, sign-definite put claim";
        case ScenarioId::ex54_entropic_brownian: return "entropic risk of c W_T, sweep over risk aversion";
        case ScenarioId::ex55_martingale: return "zero driver on a jump GBM (martingale risk process)";
        case ScenarioId::ex56_jump_call: return "call on a jump GBM, linear Brownian driver";
        case ScenarioId::ex37_entropic_jump: return "entropic risk of beta min(N_T, m) on a Poisson filtration";
    }
    return "";
}

const std::map<std::string, double>& scenario_params(ScenarioId id) {
    static const std::map<ScenarioId, std::map<std::string, double>> table = {
        {ScenarioId::fig1_put, {{"s0", 1000.0}, {"mu", 0.10}, {"sigma", 0.10}, {"strike", 1000.0}}},
        {ScenarioId::fig2_vasicek, {{"r0", 0.02}, {"a", 1.0}, {"b", 0.02}, {"sigma", 0.01}}},
        {ScenarioId::appC1_exp_payoff, {{"mu", 0.10}, {"sigma", 0.10}, {"unit_scale", 0.0}}},
        {ScenarioId::appD_sweep, {{"r0", 0.02}, {"b", 0.04}, {"sigma", 0.01}}},
        {ScenarioId::ex53_ambiguous,
         {{"s0", 1000.0}, {"mu", 0.10}, {"sigma", 0.10}, {"strike", 1000.0},
          {"lower_rate", 0.01}, {"upper_rate", 0.03}, {"position", -1.0}}},
        {ScenarioId::ex54_entropic_brownian, {{"c", 0.2}, {"gamma", 1.0}}},
        {ScenarioId::ex55_martingale,
         {{"s0", 1.0}, {"mu", 0.05}, {"sigma", 0.20}, {"gamma", -0.10}, {"jump_rate", 1.0}}},
        {ScenarioId::ex56_jump_call,
         {{"s0", 1.0}, {"strike", 1.0}, {"mu", 0.10}, {"sigma", 0.20}, {"gamma", -0.10},
          {"jump_rate", 1.0}}},
        {ScenarioId::ex37_entropic_jump,
         {{"beta", 0.5}, {"cap", 5.0}, {"jump_rate", 2.0}, {"gamma", 1.0}}},
    };
    return table.at(id);
}

ScenarioConfig default_config(ScenarioId id) {
    ScenarioConfig c;
    c.id = id;
    c.params = scenario_params(id);
    switch (id) {
        case ScenarioId::fig1_put: c.threshold = 80.0; break;
        case ScenarioId::fig2_vasicek: c.threshold = 0.05; break;
        case ScenarioId::appC1_exp_payoff: c.threshold = 1.6; break;
        case ScenarioId::appD_sweep: c.sweep = {0.25, 0.5, 1.0, 2.0, 4.0}; break;
        case ScenarioId::ex53_ambiguous: c.threshold = -4.0; break;
        case ScenarioId::ex54_entropic_brownian:
            c.threshold = 0.1;
            c.sweep = {0.5, 1.0, 2.0};
            break;
        case ScenarioId::ex55_martingale: c.threshold = 1.1; break;
        case ScenarioId::ex56_jump_call:
            c.threshold = 0.12;
            c.n_steps = 50;
            break;
        case ScenarioId::ex37_entropic_jump:
            c.threshold = 2.0;
            c.n_steps = 50;
            break;
    }
    return c;
}

double ScenarioConfig::param(const std::string& key) const {
    const auto it = params.find(key);
    if (it != params.end()) return it->second;
    const auto& defaults = scenario_params(id);
    const auto d = defaults.find(key);
    if (d == defaults.end()) throw ConfigError("unknown parameter '" + key + "'");
    return d->second;
}

void validate(const ScenarioConfig& c) {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("field '" + field + "': " + why);
    };
    if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) fail("horizon", "must be positive");
    if (c.n_steps < 1) fail("n_steps", "must be at least 1");
    if (c.n_steps > 100000) fail("n_steps", "must be at most 100000");
    if (c.n_paths < 2) fail("n_paths", "must be at least 2");
    if (!(c.tolerance_scale > 0.0)) fail("tolerance_scale", "must be positive");
    if (!(c.report_spacing > 0.0 && c.report_spacing <= 1.0)) {
        fail("report_spacing", "must lie in (0, 1]");
    }
    if (c.output_dir.empty()) fail("output_dir", "must not be empty");
    const auto& known = scenario_params(c.id);
    for (const auto& [key, value] : c.params) {
        if (!known.count(key)) fail("params." + key, "unknown parameter for this scenario");
        if (!std::isfinite(value)) fail("params." + key, "must be finite");
    }
    const bool uses_sweep =
        c.id == ScenarioId::appD_sweep || c.id == ScenarioId::ex54_entropic_brownian;
    if (!uses_sweep && !c.sweep.empty()) fail("sweep", "not used by this scenario");
    if (uses_sweep && c.sweep.empty()) fail("sweep", "needs at least one value");
    for (double v : c.sweep) {
        if (!(v > 0.0)) fail("sweep", "values must be positive");
    }
    const bool stops = c.id != ScenarioId::appD_sweep;
    if (stops && !c.threshold) fail("threshold", "required for this scenario");
    if (!stops && c.threshold) fail("threshold", "not used by this scenario");

    auto positive = [&](const char* key) {
        if (!(c.param(key) > 0.0)) fail(std::string("params.") + key, "must be positive");
    };
    switch (c.id) {
        case ScenarioId::fig1_put:
        case ScenarioId::ex53_ambiguous:
            positive("s0");
            positive("strike");
            positive("sigma");
            if (c.id == ScenarioId::ex53_ambiguous) {
                if (!(c.param("lower_rate") >= 0.0 && c.param("lower_rate") <= c.param("upper_rate"))) {
                    fail("params.lower_rate", "needs 0 <= lower_rate <= upper_rate");
                }
                if (std::abs(c.param("position")) != 1.0) fail("params.position", "must be +1 or -1");
            }
            break;
        case ScenarioId::fig2_vasicek:
            positive("a");
            if (!(c.param("sigma") >= 0.0)) fail("params.sigma", "must be non-negative");
            break;
        case ScenarioId::appD_sweep:
            if (!(c.param("sigma") >= 0.0)) fail("params.sigma", "must be non-negative");
            break;
        case ScenarioId::appC1_exp_payoff:
            positive("sigma");
            break;
        case ScenarioId::ex54_entropic_brownian:
            positive("gamma");
            break;
        case ScenarioId::ex55_martingale:
        case ScenarioId::ex56_jump_call:
            positive("s0");
            positive("sigma");
            if (!(c.param("gamma") > -1.0)) fail("params.gamma", "must exceed -1");
            if (!(c.param("jump_rate") >= 0.0)) fail("params.jump_rate", "must be non-negative");
            if (c.id == ScenarioId::ex56_jump_call) positive("strike");
            break;
        case ScenarioId::ex37_entropic_jump:
            positive("gamma");
            if (!(c.param("jump_rate") >= 0.0)) fail("params.jump_rate", "must be non-negative");
            if (!(c.param("cap") >= 0.0) || c.param("cap") != std::floor(c.param("cap"))) {
                fail("params.cap", "must be a non-negative integer");
            }
            break;
    }
}

bool ScenarioReport::passed() const noexcept {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

const StoppingRow* ScenarioReport::stopping_row(std::string_view method) const noexcept {
    for (const auto& r : stopping) {
        if (r.method == method) return &r;
    }
    return nullptr;
}

const RateRow* ScenarioReport::rate_row_near(double t) const noexcept {
    const RateRow* best = nullptr;
    for (const auto& r : rates) {
        if (!best || std::abs(r.t - t) < std::abs(best->t - t)) best = &r;
    }
    return best;
}

ScenarioReport run_scenario(const ScenarioConfig& config) {
    validate(config);
    switch (config.id) {
        case ScenarioId::fig1_put: return run_fig1(config);
        case ScenarioId::fig2_vasicek: return run_fig2(config);
        case ScenarioId::appD_sweep: return run_appD_sweep(config);
        default: return run_example(config);
    }
}

std::string format_number(double x) {
    if (std::isnan(x)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace

std::filesystem::path write_report(const ScenarioReport& report, const std::filesystem::path& root) {
    const auto dir = root / std::string(to_string(report.config.id));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());

    std::string rates = "t,closed_form,driver_mc,driver_se,fd_mc,fd_se\n";
    for (const auto& r : report.rates) {
        rates += format_number(r.t) + "," + cell(r.closed_form) + "," + cell(r.driver_mc) + "," +
                 cell(r.driver_se) + "," + cell(r.fd_mc) + "," + cell(r.fd_se) + "\n";
    }
    write_file(dir / "rates.csv", rates);

    std::string stopping = "method,value,se,hit_prob\n";
    for (const auto& r : report.stopping) {
        stopping += r.method + "," + format_number(r.value) + "," + format_number(r.se) + "," +
                    format_number(r.hit_prob) + "\n";
    }
    write_file(dir / "stopping.csv", stopping);

    for (const auto& table : report.tables) {
        std::string text;
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            text += (j ? "," : "") + table.header[j];
        }
        text += "\n";
        for (const auto& row : table.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) text += (j ? "," : "") + cell(row[j]);
            text += "\n";
        }
        write_file(dir / table.file_name, text);
    }

    std::string checks = "check,passed,detail\n";
    for (const auto& c : report.checks) {
        checks += c.name + "," + (c.passed ? "1" : "0") + ",\"" + c.detail + "\"\n";
    }
    write_file(dir / "checks.csv", checks);
    // the config echo plus the derived step size
    auto meta = nlohmann::json::parse(write_config(report.config));
    meta["dt"] = report.config.horizon / static_cast<double>(report.config.n_steps);
    write_file(dir / "meta.json", meta.dump(2) + "\n");
    write_file(dir / "plot_spec.txt", report.plot_spec);
    return dir;
}

}  // namespace reslab
