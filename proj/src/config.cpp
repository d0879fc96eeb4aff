#include "reslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reslab/errors.hpp"

namespace reslab {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& why) {
    throw ConfigError("field '" + field + "': " + why);
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) field_error(field, "expected a number");
    return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& field) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
        field_error(field, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

}  // namespace

ScenarioConfig parse_config(std::string_view json_text) {
    json doc;
    bool blank = true;
    for (char ch : json_text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
    }
    if (blank) field_error("scenario_id", "required field missing (empty config)");
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (!doc.contains("scenario_id")) field_error("scenario_id", "required field missing");
    if (!doc["scenario_id"].is_string()) field_error("scenario_id", "expected a string");
    const auto name = doc["scenario_id"].get<std::string>();
    const auto id = parse_scenario_id(name);
    if (!id) field_error("scenario_id", "unknown scenario '" + name + "'");

    ScenarioConfig c = default_config(*id);
    for (const auto& [key, v] : doc.items()) {
        if (key == "scenario_id") continue;
        if (key == "horizon") {
            c.horizon = as_number(v, key);
        } else if (key == "n_steps") {
            c.n_steps = as_count(v, key);
        } else if (key == "n_paths") {
            c.n_paths = as_count(v, key);
        } else if (key == "seed") {
            c.seed = as_count(v, key);
        } else if (key == "threshold") {
            if (v.is_null()) {
                c.threshold.reset();
            } else {
                c.threshold = as_number(v, key);
            }
        } else if (key == "output_dir") {
            if (!v.is_string()) field_error(key, "expected a string");
            c.output_dir = v.get<std::string>();
        } else if (key == "tolerance_scale") {
            c.tolerance_scale = as_number(v, key);
        } else if (key == "report_spacing") {
            c.report_spacing = as_number(v, key);
        } else if (key == "params") {
            if (!v.is_object()) field_error(key, "expected an object");
            const auto& known = scenario_params(*id);
            for (const auto& [pk, pv] : v.items()) {
                if (!known.count(pk)) field_error("params." + pk, "unknown parameter for " + name);
                c.params[pk] = as_number(pv, "params." + pk);
            }
        } else if (key == "sweep") {
            if (!v.is_array()) field_error(key, "expected an array of numbers");
            c.sweep.clear();
            for (const auto& x : v) c.sweep.push_back(as_number(x, key));
        } else if (key == "dt") {
            // derived; checked against horizon / n_steps below
        } else {
            field_error(key, "unknown field");
        }
    }
    if (doc.contains("dt")) {
        const double dt = as_number(doc["dt"], "dt");
        const double expect = c.horizon / static_cast<double>(std::max<std::size_t>(c.n_steps, 1));
        if (std::abs(dt - expect) > 1e-12 * std::max(1.0, expect)) {
            field_error("dt", "inconsistent with horizon / n_steps");
        }
    }
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string write_config(const ScenarioConfig& c) {
    json doc = json::object();
    doc["scenario_id"] = std::string(to_string(c.id));
    doc["horizon"] = c.horizon;
    doc["n_steps"] = c.n_steps;
    doc["n_paths"] = c.n_paths;
    doc["seed"] = c.seed;
    doc["threshold"] = c.threshold ? json(*c.threshold) : json(nullptr);
    doc["output_dir"] = c.output_dir;
    doc["tolerance_scale"] = c.tolerance_scale;
    doc["report_spacing"] = c.report_spacing;
    json params = json::object();
    for (const auto& [k, v] : c.params) params[k] = v;
    doc["params"] = params;
    doc["sweep"] = c.sweep;
    return doc.dump(2) + "\n";
}

}  // namespace reslab
