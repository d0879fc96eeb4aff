#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "reslab/config.hpp"
#include "reslab/driver.hpp"
#include "reslab/errors.hpp"
#include "reslab/scenario.hpp"

using namespace reslab;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("builtin driver flags are consistent with their evaluations") {
    for (const auto& d : builtin_drivers()) {
        INFO(d.name());
        CHECK(check_driver_flags(d).empty());
    }
    const Driver liar("liar", [](const DriverArgs& a) { return a.y * a.y; }, DriverFlags{.y_independent = true});
    CHECK_FALSE(check_driver_flags(liar).empty());
}

TEST_CASE("config round trip for every default") {
    for (auto id : all_scenarios()) {
        const auto c = default_config(id);
        CHECK(parse_config(write_config(c)) == c);
        CHECK(parse_scenario_id(to_string(id)) == id);
    }
    CHECK_FALSE(parse_scenario_id("nope"));
}

TEST_CASE("config errors name the field") {
    auto message = [](std::string_view text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("").find("scenario_id") != std::string::npos);
    CHECK(message("{}").find("scenario_id") != std::string::npos);
    CHECK(message(R"({"scenario_id": "nope"})").find("scenario_id") != std::string::npos);
    CHECK(message(R"({"scenario_id": "fig1_put", "colour": 1})").find("colour") != std::string::npos);
    CHECK(message(R"({"scenario_id": "fig1_put", "n_steps": 0})").find("n_steps") != std::string::npos);
    CHECK(message(R"({"scenario_id": "fig1_put", "n_steps": -4})").find("n_steps") != std::string::npos);
    CHECK(message(R"({"scenario_id": "fig1_put", "params": {"a": 1}})").find("params.a") != std::string::npos);
    CHECK(message(R"({"scenario_id": "fig2_vasicek", "params": {"a": 0}})").find("params.a") != std::string::npos);
    CHECK(message(R"({"scenario_id": "ex55_martingale", "params": {"gamma": -1}})").find("params.gamma") !=
          std::string::npos);
    CHECK(message(R"({"scenario_id": "appD_sweep", "threshold": 0.1})").find("threshold") != std::string::npos);
    CHECK(message("{not json").find("malformed") != std::string::npos);
}

TEST_CASE("fig2 defaults are the caption parameters") {
    const auto c = parse_config(R"({"scenario_id": "fig2_vasicek"})");
    CHECK(c.param("r0") == 0.02);
    CHECK(c.param("a") == 1.0);
    CHECK(c.param("b") == 0.02);
    CHECK(c.param("sigma") == 0.01);
    CHECK(*c.threshold == 0.05);
    CHECK(c.n_steps == 252);
    CHECK(c.horizon == 1.0);
}

TEST_CASE("reports are byte-reproducible and record dt") {
    auto c = default_config(ScenarioId::fig1_put);
    c.n_paths = 3000;
    c.n_steps = 10;
    const auto root = std::filesystem::temp_directory_path() / "reslab_unit_reports";
    std::filesystem::remove_all(root);
    const auto a = write_report(run_scenario(c), root / "a");
    const auto b = write_report(run_scenario(c), root / "b");
    for (const char* f : {"rates.csv", "stopping.csv", "meta.json", "mean_path.csv", "checks.csv"}) {
        INFO(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const auto meta = slurp(a / "meta.json");
    CHECK(meta.find("\"dt\": 0.1") != std::string::npos);
    CHECK(slurp(a / "rates.csv").rfind("t,closed_form,driver_mc,driver_se,fd_mc,fd_se\n", 0) == 0);
    CHECK(slurp(a / "stopping.csv").rfind("method,value,se,hit_prob\n", 0) == 0);
    std::filesystem::remove_all(root);
}

TEST_CASE("rare barrier: the runner reports instead of throwing") {
    auto c = default_config(ScenarioId::fig2_vasicek);
    c.n_paths = 2000;
    c.n_steps = 50;
    const auto rep = run_scenario(c);
    CHECK(rep.stopping_row("driver_expectation") == nullptr);
    CHECK_FALSE(rep.passed());
    bool flagged = false;
    for (const auto& chk : rep.checks) flagged = flagged || (chk.name == "stopping_time_estimable" && !chk.passed);
    CHECK(flagged);
}

TEST_CASE("single-value sweep gives one curve and no comparison") {
    auto c = default_config(ScenarioId::appD_sweep);
    c.n_paths = 500;
    c.n_steps = 20;
    c.sweep = {1.0};
    const auto rep = run_scenario(c);
    CHECK_FALSE(rep.rates.empty());
    for (const auto& chk : rep.checks) CHECK(chk.name.find("nondecreasing") == std::string::npos);
}

TEST_CASE("ex54 closed form and exact driver expectation") {
    auto c = default_config(ScenarioId::ex54_entropic_brownian);
    c.n_paths = 2000;
    c.n_steps = 40;
    c.sweep = {0.5, 2.0};
    const auto rep = run_scenario(c);
    const auto* row = rep.rate_row_near(0.25);
    REQUIRE(row);
    CHECK(std::abs(*row->closed_form + 0.02) < 1e-10);
    CHECK(std::abs(*row->driver_mc - *row->closed_form) < 1e-10);
}
