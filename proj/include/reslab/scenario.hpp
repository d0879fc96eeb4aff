#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reslab {

enum class ScenarioId {
    fig1_put,
    fig2_vasicek,
    appC1_exp_payoff,
    appD_sweep,
    ex53_ambiguous,
    ex54_entropic_brownian,
    ex55_martingale,
    ex56_jump_call,
    ex37_entropic_jump,
};

std::string_view to_string(ScenarioId id) noexcept;
std::optional<ScenarioId> parse_scenario_id(std::string_view name) noexcept;
std::span<const ScenarioId> all_scenarios() noexcept;
std::string_view scenario_summary(ScenarioId id) noexcept;

struct ScenarioConfig {
    ScenarioId id = ScenarioId::fig1_put;
    double horizon = 1.0;
    std::size_t n_steps = 252;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 7;
    std::optional<double> threshold;
    std::string output_dir = "out";
    double tolerance_scale = 1.0;
    // Spacing of the reported deterministic times, as a fraction of T.
    double report_spacing = 0.05;
    std::map<std::string, double> params;
    // Sweep values (appD: mean-reversion speeds, ex54: risk aversions).
    std::vector<double> sweep;

    double param(const std::string& key) const;
    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig default_config(ScenarioId id);
// Parameter names accepted by a scenario (with their defaults).
const std::map<std::string, double>& scenario_params(ScenarioId id);
// Throws ConfigError on any invalid field.
void validate(const ScenarioConfig& config);

// Optional values print as NA.
struct RateRow {
    double t = 0.0;
    std::optional<double> closed_form;
    std::optional<double> driver_mc;
    std::optional<double> driver_se;
    std::optional<double> fd_mc;
    std::optional<double> fd_se;
};

struct StoppingRow {
    std::string method;
    double value = 0.0;
    double se = 0.0;
    double hit_prob = 0.0;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Table {
    std::string file_name;
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;
};

struct ScenarioReport {
    ScenarioConfig config;
    std::vector<RateRow> rates;
    std::vector<StoppingRow> stopping;
    std::vector<Check> checks;
    std::vector<Table> tables;
    std::string plot_spec;

    bool passed() const noexcept;
    const StoppingRow* stopping_row(std::string_view method) const noexcept;
    const RateRow* rate_row_near(double t) const noexcept;
};

ScenarioReport run_fig1(const ScenarioConfig& config);
ScenarioReport run_fig2(const ScenarioConfig& config);
ScenarioReport run_appD_sweep(const ScenarioConfig& config);
ScenarioReport run_example(const ScenarioConfig& config);
ScenarioReport run_scenario(const ScenarioConfig& config);

// Writes rates.csv, stopping.csv, meta.json, plot_spec.txt and extra tables
// under root/<scenario id>/. Returns that directory.
std::filesystem::path write_report(const ScenarioReport& report,
                                   const std::filesystem::path& root);

std::string format_number(double x);

}  // namespace reslab
