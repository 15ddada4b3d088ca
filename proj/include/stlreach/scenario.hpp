#pragma once

#include <string>

#include "json.hpp"
#include "stlreach/formula.hpp"
#include "stlreach/monitor.hpp"
#include "stlreach/reach.hpp"
#include "stlreach/system.hpp"

namespace stlreach {

struct Scenario {
    std::string name;
    SystemModel model;
    IntervalBox initial_box;
    PredicateTable predicates;
    std::string formula_text;
    Formula formula;
    double horizon = 0.0;
    VerifyMode mode = VerifyMode::Verdict;
    double window_end = 0.0;  // 0: derived from horizon and formula
    StepControl ctrl;
    StopCriterion stop;
    std::string out_dir = "out";
    std::string export_format = "both";  // json | csv | both
};

// Strict validation: unknown keys are rejected (keys starting with '_' are comments), dimensions
// must agree and the formula must parse and bind. Throws ConfigError, ParseError or BindingError.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

VerifyMode parse_mode(const std::string& s);  // throws ConfigError

}  // namespace stlreach
