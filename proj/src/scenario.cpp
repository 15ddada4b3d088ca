#include "stlreach/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "stlreach/error.hpp"
#include "stlreach/serialize.hpp"

namespace stlreach {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required = {}) {
    if (!obj.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!key.empty() && key[0] == '_') {
            continue;
        }
        if (!ok.count(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    for (const char* key : required) {
        if (!obj.contains(key)) {
            throw ConfigError(where + ": missing required key '" + std::string(key) + "'");
        }
    }
}

double number(const json& obj, const char* key, const std::string& where, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj[key];
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw ConfigError(where + "." + key + " must be a finite number");
    }
    return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& where, int fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj[key].is_number_integer()) {
        throw ConfigError(where + "." + key + " must be an integer");
    }
    return obj[key].get<int>();
}

std::vector<std::string> strings(const json& v, const std::string& where) {
    if (!v.is_array()) {
        throw ConfigError(where + " must be an array of strings");
    }
    std::vector<std::string> out;
    for (const json& s : v) {
        if (!s.is_string()) {
            throw ConfigError(where + " must be an array of strings");
        }
        out.push_back(s.get<std::string>());
    }
    return out;
}

std::map<std::string, double> params(const json& obj) {
    std::map<std::string, double> out;
    if (!obj.contains("params")) {
        return out;
    }
    if (!obj["params"].is_object()) {
        throw ConfigError("system.params must be an object of numbers");
    }
    for (const auto& [k, v] : obj["params"].items()) {
        if (!v.is_number()) {
            throw ConfigError("system.params." + k + " must be a number");
        }
        out[k] = v.get<double>();
    }
    return out;
}

template <class F>
auto rethrow_as_config(F f) {
    try {
        return f();
    } catch (const UsageError& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

VerifyMode parse_mode(const std::string& s) {
    if (s == "verdict") {
        return VerifyMode::Verdict;
    }
    if (s == "monitor") {
        return VerifyMode::Monitor;
    }
    throw ConfigError("mode must be 'verdict' or 'monitor', got '" + s + "'");
}

Scenario parse_scenario(const json& j) {
    check_keys(j,
               "config",
               {"name", "system", "initial_box", "disturbance_box", "predicates", "formula", "horizon", "mode",
                "window_end", "step_control", "stop", "output"},
               {"system", "initial_box", "predicates", "formula", "horizon"});
    Scenario sc;
    if (j.contains("name")) {
        if (!j["name"].is_string()) {
            throw ConfigError("name must be a string");
        }
        sc.name = j["name"].get<std::string>();
    }

    const json& sys = j["system"];
    check_keys(sys, "system", {"builtin", "rhs", "state", "disturbance", "params"});
    const IntervalBox wbox =
        j.contains("disturbance_box") ? box_from_json(j["disturbance_box"], "disturbance_box") : IntervalBox{};
    if (sys.contains("builtin") == sys.contains("rhs")) {
        throw ConfigError("system needs exactly one of 'builtin' or 'rhs'");
    }
    if (sys.contains("builtin")) {
        if (!sys["builtin"].is_string()) {
            throw ConfigError("system.builtin must be a string");
        }
        if (sys.contains("state") || sys.contains("disturbance")) {
            throw ConfigError("system.state and system.disturbance only apply to rhs systems");
        }
        if (wbox.size() != 0) {
            throw ConfigError("builtin systems take no disturbance");
        }
        sc.model = rethrow_as_config([&] { return builtin_system(sys["builtin"].get<std::string>(), params(sys)); });
    } else {
        const auto rhs = strings(sys["rhs"], "system.rhs");
        if (rhs.empty()) {
            throw ConfigError("system.rhs must not be empty");
        }
        const auto state = sys.contains("state") ? strings(sys["state"], "system.state") : std::vector<std::string>{};
        const auto dist =
            sys.contains("disturbance") ? strings(sys["disturbance"], "system.disturbance") : std::vector<std::string>{};
        if (!state.empty() && state.size() != rhs.size()) {
            throw ConfigError("system.state must name one symbol per rhs component");
        }
        sc.model = rethrow_as_config([&] {
            return make_system(sc.name.empty() ? "custom" : sc.name, rhs, params(sys), wbox, state, dist);
        });
    }

    sc.initial_box = box_from_json(j["initial_box"], "initial_box");
    if (sc.initial_box.size() != sc.model.dim()) {
        throw ConfigError("initial_box dimension " + std::to_string(sc.initial_box.size()) +
                          " does not match the system dimension " + std::to_string(sc.model.dim()));
    }

    const json& preds = j["predicates"];
    if (!preds.is_object() || preds.empty()) {
        throw ConfigError("predicates must be a non-empty object");
    }
    for (const auto& [name, spec] : preds.items()) {
        const std::string where = "predicates." + name;
        check_keys(spec, where, {"region", "polarity"}, {"region"});
        if (name == "T" || name == "U" || name == "G" || name == "F") {
            throw ConfigError(where + ": reserved name");
        }
        Predicate p;
        p.name = name;
        p.region = box_from_json(spec["region"], where + ".region");
        if (p.region.size() != sc.model.dim()) {
            throw ConfigError(where + ".region dimension does not match the system");
        }
        if (spec.contains("polarity")) {
            const json& pol = spec["polarity"];
            if (pol == "inclusion") {
                p.polarity = Polarity::Inclusion;
            } else if (pol == "exclusion") {
                p.polarity = Polarity::Exclusion;
            } else {
                throw ConfigError(where + ".polarity must be 'inclusion' or 'exclusion'");
            }
        }
        sc.predicates.emplace(name, std::move(p));
    }

    if (!j["formula"].is_string()) {
        throw ConfigError("formula must be a string");
    }
    sc.formula_text = j["formula"].get<std::string>();
    sc.formula = parse_formula(sc.formula_text);
    bind_predicates(sc.formula, sc.predicates);

    sc.horizon = number(j, "horizon", "config", 0.0);
    if (!(sc.horizon > 0.0)) {
        throw ConfigError("horizon must be positive");
    }
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) {
            throw ConfigError("mode must be a string");
        }
        sc.mode = parse_mode(j["mode"].get<std::string>());
    }
    sc.window_end = number(j, "window_end", "config", 0.0);
    if (sc.window_end < 0.0 || sc.window_end > sc.horizon) {
        throw ConfigError("window_end must lie in [0, horizon]");
    }

    if (j.contains("step_control")) {
        const json& c = j["step_control"];
        check_keys(c, "step_control",
                   {"order", "refine_order", "h_init", "h_min", "h_max", "lte_tol", "growth", "extension_h"});
        sc.ctrl.order = integer(c, "order", "step_control", sc.ctrl.order);
        sc.ctrl.refine_order = integer(c, "refine_order", "step_control", sc.ctrl.order);
        sc.ctrl.h_init = number(c, "h_init", "step_control", sc.ctrl.h_init);
        sc.ctrl.h_min = number(c, "h_min", "step_control", sc.ctrl.h_min);
        sc.ctrl.h_max = number(c, "h_max", "step_control", sc.ctrl.h_max);
        sc.ctrl.lte_tol = number(c, "lte_tol", "step_control", sc.ctrl.lte_tol);
        sc.ctrl.growth = number(c, "growth", "step_control", sc.ctrl.growth);
        sc.ctrl.extension_h = number(c, "extension_h", "step_control", sc.ctrl.extension_h);
    }
    rethrow_as_config([&] {
        sc.ctrl.validate();
        return 0;
    });

    sc.stop.max_final_time = sc.horizon;
    if (j.contains("stop")) {
        const json& s = j["stop"];
        check_keys(s, "stop", {"min_segment_width", "max_iterations", "max_final_time"});
        sc.stop.min_segment_width = number(s, "min_segment_width", "stop", sc.stop.min_segment_width);
        sc.stop.max_iterations = integer(s, "max_iterations", "stop", sc.stop.max_iterations);
        sc.stop.max_final_time = number(s, "max_final_time", "stop", sc.stop.max_final_time);
    }
    rethrow_as_config([&] {
        sc.stop.validate();
        return 0;
    });
    if (sc.stop.max_final_time < sc.horizon) {
        throw ConfigError("stop.max_final_time must be at least the horizon");
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, "output", {"dir", "export"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) {
                throw ConfigError("output.dir must be a string");
            }
            sc.out_dir = o["dir"].get<std::string>();
        }
        if (o.contains("export")) {
            if (!o["export"].is_string()) {
                throw ConfigError("output.export must be a string");
            }
            sc.export_format = o["export"].get<std::string>();
        }
    }
    if (sc.export_format != "json" && sc.export_format != "csv" && sc.export_format != "both") {
        throw ConfigError("output.export must be 'json', 'csv' or 'both'");
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(j);
}

}  // namespace stlreach
