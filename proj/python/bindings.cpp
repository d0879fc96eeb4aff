#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "reslab/closed_forms.hpp"
#include "reslab/config.hpp"
#include "reslab/errors.hpp"
#include "reslab/properties.hpp"
#include "reslab/rng.hpp"
#include "reslab/scenario.hpp"
#include "reslab/special_rates.hpp"

namespace py = pybind11;
using namespace reslab;

namespace {

py::object opt(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

py::dict report_dict(const ScenarioReport& r) {
    py::dict out;
    out["scenario_id"] = std::string(to_string(r.config.id));
    out["config"] = write_config(r.config);
    py::list rates;
    for (const auto& row : r.rates) {
        py::dict d;
        d["t"] = row.t;
        d["closed_form"] = opt(row.closed_form);
        d["driver_mc"] = opt(row.driver_mc);
        d["driver_se"] = opt(row.driver_se);
        d["fd_mc"] = opt(row.fd_mc);
        d["fd_se"] = opt(row.fd_se);
        rates.append(d);
    }
    out["rates"] = rates;
    py::list stopping;
    for (const auto& s : r.stopping) {
        stopping.append(py::dict(py::arg("method") = s.method, py::arg("value") = s.value, py::arg("se") = s.se,
                                 py::arg("hit_prob") = s.hit_prob));
    }
    out["stopping"] = stopping;
    py::list checks;
    for (const auto& c : r.checks) {
        checks.append(py::dict(py::arg("name") = c.name, py::arg("passed") = c.passed, py::arg("detail") = c.detail));
    }
    out["checks"] = checks;
    out["passed"] = r.passed();
    return out;
}

py::list results_list(const std::vector<PropertyResult>& results) {
    py::list out;
    for (const auto& r : results) {
        out.append(py::dict(py::arg("name") = r.name, py::arg("passed") = r.passed, py::arg("detail") = r.detail));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_reslab, m) {
    m.doc() = "Resilience rates of BSDE-based dynamic risk measures";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<EstimationError>(m, "EstimationError", PyExc_RuntimeError);
    py::register_exception<TruncationError>(m, "TruncationError", PyExc_ArithmeticError);

    m.def("list_scenarios", [] {
        std::vector<std::string> out;
        for (auto id : all_scenarios()) out.emplace_back(to_string(id));
        return out;
    });
    m.def("default_config", [](const std::string& name) {
        const auto id = parse_scenario_id(name);
        if (!id) throw ConfigError("field 'scenario_id': unknown scenario '" + name + "'");
        return write_config(default_config(*id));
    }, "Default config of a scenario as JSON text.");
    m.def("normalize_config", [](const std::string& json) { return write_config(parse_config(json)); },
          "Parse, fill defaults, validate and re-serialise a JSON config.");
    m.def("run_scenario", [](const std::string& json) {
        const auto c = parse_config(json);
        ScenarioReport rep;
        {
            py::gil_scoped_release release;
            rep = run_scenario(c);
        }
        return report_dict(rep);
    }, py::arg("config_json"));
    m.def("run_and_write", [](const std::string& json, const std::filesystem::path& root) {
        const auto c = parse_config(json);
        py::gil_scoped_release release;
        return write_report(run_scenario(c), root);
    }, py::arg("config_json"), py::arg("root"));

    m.def("run_property_suite", [](std::size_t n_paths, std::size_t n_steps, std::uint64_t seed) {
        return results_list(run_property_suite({n_paths, n_steps, seed, 1.0}));
    }, py::arg("n_paths") = 20000, py::arg("n_steps") = 100, py::arg("seed") = 7);
    m.def("run_selftest", [] { return results_list(run_selftest()); });

    m.def("put_rate", [](double t, double s0, double strike, double mu, double sigma, double horizon) {
        return bs_put_rate_t(BSPutSpec{s0, strike, mu, sigma, horizon}, t);
    }, py::arg("t"), py::arg("s0") = 1000.0, py::arg("strike") = 1000.0, py::arg("mu") = 0.1,
       py::arg("sigma") = 0.1, py::arg("horizon") = 1.0);
    m.def("put_price", [](double t, double s, double strike, double sigma, double horizon) {
        return bs_put_price(BSPutSpec{s, strike, 0.0, sigma, horizon}, t, s);
    }, py::arg("t"), py::arg("s"), py::arg("strike") = 1000.0, py::arg("sigma") = 0.1, py::arg("horizon") = 1.0);
    m.def("vasicek_rate", [](double t, double r0, double a, double b, double sigma, double horizon) {
        return vasicek_rate_t(VasicekBondSpec{r0, a, b, sigma, horizon}, t);
    }, py::arg("t"), py::arg("r0") = 0.02, py::arg("a") = 1.0, py::arg("b") = 0.02, py::arg("sigma") = 0.01,
       py::arg("horizon") = 1.0);
    m.def("entropic_jump_rates", [](double t, double beta, std::int64_t cap, double jump_rate, double gamma) {
        EntropicJumpSpec spec;
        spec.gamma = gamma;
        spec.jump_rate = jump_rate;
        spec.payoff = [beta, cap](std::int64_t n) { return beta * static_cast<double>(std::min(n, cap)); };
        spec.saturation = cap;
        const auto r = entropic_rate_jump(spec, t);
        return std::make_pair(r.martingale_form.value, r.driver_form.value);
    }, py::arg("t"), py::arg("beta") = 0.5, py::arg("cap") = 5, py::arg("jump_rate") = 2.0, py::arg("gamma") = 1.0);
    m.def("philox", [](std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
        return Philox4x32::generate(ctr, key);
    });
}
