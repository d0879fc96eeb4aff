#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "reslab/config.hpp"
#include "reslab/errors.hpp"
#include "reslab/properties.hpp"
#include "reslab/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kBandFailure = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> steps;
    std::optional<double> tolerance_scale;
    std::string out = "out";
};

void print_scenarios(std::ostream& os) {
    for (auto id : reslab::all_scenarios()) {
        os << "  " << reslab::to_string(id) << "  " << reslab::scenario_summary(id) << "\n";
    }
}

int print_results(const std::vector<reslab::PropertyResult>& results) {
    bool ok = true;
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
        std::printf("%-*s  %s  %s\n", static_cast<int>(width), r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.detail.c_str());
        ok = ok && r.passed;
    }
    return ok ? kOk : kBandFailure;
}

void check_writable(const std::filesystem::path& root) {
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw reslab::ConfigError("field 'output_dir': cannot create " + root.string() + ": " + ec.message());
    const auto probe = root / ".write_probe";
    std::ofstream f(probe);
    if (!f) throw reslab::ConfigError("field 'output_dir': " + root.string() + " is not writable");
    f.close();
    std::filesystem::remove(probe, ec);
}

int run(const std::string& scenario, const std::string& config_path, const Overrides& o, bool out_given,
        int verbosity) {
    reslab::ScenarioConfig c;
    if (!config_path.empty()) {
        c = reslab::load_config(config_path);
        if (!scenario.empty() && reslab::parse_scenario_id(scenario) != c.id) {
            throw reslab::ConfigError("field 'scenario_id': --scenario disagrees with the config file");
        }
    } else {
        if (scenario.empty()) throw reslab::ConfigError("field 'scenario_id': pass --scenario or --config");
        const auto id = reslab::parse_scenario_id(scenario);
        if (!id) throw reslab::ConfigError("field 'scenario_id': unknown scenario '" + scenario + "'");
        c = reslab::default_config(*id);
    }
    if (o.seed) c.seed = *o.seed;
    if (o.paths) c.n_paths = *o.paths;
    if (o.steps) c.n_steps = *o.steps;
    if (o.tolerance_scale) c.tolerance_scale = *o.tolerance_scale;
    if (out_given || config_path.empty()) c.output_dir = o.out;
    reslab::validate(c);
    check_writable(c.output_dir);

    const auto report = reslab::run_scenario(c);
    const auto dir = reslab::write_report(report, c.output_dir);
    std::size_t failed = 0;
    for (const auto& chk : report.checks) {
        if (!chk.passed) ++failed;
        if (verbosity > 0 || !chk.passed) {
            std::printf("  %s %s  %s\n", chk.passed ? "ok  " : "FAIL", chk.name.c_str(), chk.detail.c_str());
        }
    }
    if (const auto* s = report.stopping_row("driver_expectation")) {
        std::printf("stopping-time rate (driver): %.6g (se %.3g, P(tau<T) %.4f)\n", s->value, s->se, s->hit_prob);
    }
    if (const auto* s = report.stopping_row("finite_difference")) {
        std::printf("stopping-time rate (fd):     %.6g (se %.3g)\n", s->value, s->se);
    }
    std::printf("%s: %zu/%zu checks passed, outputs in %s\n", std::string(reslab::to_string(c.id)).c_str(),
                report.checks.size() - failed, report.checks.size(), dir.string().c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resilience-rate estimation for BSDE-based dynamic risk measures"};
    app.require_subcommand(1);

    std::string scenario, config_path;
    Overrides o;
    int verbosity = 0;
    std::uint64_t seed = 0;
    std::size_t paths = 0, steps = 0;
    double tol = 1.0;

    auto* run_cmd = app.add_subcommand("run", "run one scenario and write its reports");
    run_cmd->add_option("--scenario", scenario, "scenario id");
    run_cmd->add_option("--config", config_path, "JSON scenario config");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "RNG seed");
    auto* paths_opt = run_cmd->add_option("--paths", paths, "number of Monte Carlo paths");
    auto* steps_opt = run_cmd->add_option("--steps", steps, "time steps on [0, T]");
    auto* out_opt = run_cmd->add_option("--out", o.out, "output root directory");
    auto* tol_opt = run_cmd->add_option("--tolerance-scale", tol, "multiplier on the SE bands");
    run_cmd->add_flag("-v,--verbose", verbosity, "print every check");

    auto* list_cmd = app.add_subcommand("list-scenarios", "list scenario ids");
    std::string config_dir;
    list_cmd->add_option("--write-configs", config_dir, "also write default configs into this directory");

    reslab::SuiteOptions suite;
    auto* prop_cmd = app.add_subcommand("properties", "run the structural property suite");
    auto* self_cmd = app.add_subcommand("selftest", "fast smoke checks of every module");
    for (auto* cmd : {prop_cmd, self_cmd}) {
        cmd->add_option("--seed", suite.seed, "RNG seed");
        cmd->add_option("--paths", suite.n_paths, "number of Monte Carlo paths");
        cmd->add_option("--steps", suite.n_steps, "time steps on [0, 1]");
        cmd->add_option("--tolerance-scale", suite.tolerance_scale, "multiplier on the SE bands");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (run_cmd->parsed()) {
            if (*seed_opt) o.seed = seed;
            if (*paths_opt) o.paths = paths;
            if (*steps_opt) o.steps = steps;
            if (*tol_opt) o.tolerance_scale = tol;
            return run(scenario, config_path, o, static_cast<bool>(*out_opt), verbosity);
        }
        if (list_cmd->parsed()) {
            print_scenarios(std::cout);
            if (!config_dir.empty()) {
                std::filesystem::create_directories(config_dir);
                for (auto id : reslab::all_scenarios()) {
                    std::ofstream f(std::filesystem::path(config_dir) /
                                    (std::string(reslab::to_string(id)) + ".json"));
                    f << reslab::write_config(reslab::default_config(id));
                }
            }
            return kOk;
        }
        if (suite.n_paths < 100 || suite.n_steps < 8) {
            throw reslab::ConfigError("field 'paths'/'steps': need at least 100 paths and 8 steps");
        }
        if (prop_cmd->parsed()) return print_results(reslab::run_property_suite(suite));
        if (self_cmd->parsed()) return print_results(reslab::run_selftest(suite));
    } catch (const reslab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        if (std::string(e.what()).find("scenario_id") != std::string::npos) {
            std::cerr << "known scenarios:\n";
            print_scenarios(std::cerr);
        }
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}
