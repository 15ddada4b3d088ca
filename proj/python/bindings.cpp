#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "stlreach/commands.hpp"
#include "stlreach/error.hpp"
#include "stlreach/formula.hpp"
#include "stlreach/interval.hpp"
#include "stlreach/monitor.hpp"
#include "stlreach/reach.hpp"
#include "stlreach/scenario.hpp"
#include "stlreach/serialize.hpp"

namespace py = pybind11;
using nlohmann::json;
namespace sr = stlreach;

namespace {

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw sr::ConfigError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

// {"name": [pieces...], ...} -> root signal pieces
std::string eval_signals(const std::string& formula, const std::string& signals_json, std::optional<double> horizon) {
    const json j = parse_json(signals_json, "signals");
    if (!j.is_object() || j.empty()) {
        throw sr::ConfigError("signals must map predicate names to signal arrays");
    }
    std::map<std::string, sr::IntervalSignal, std::less<>> signals;
    double shortest = 0.0;
    for (const auto& [name, value] : j.items()) {
        sr::IntervalSignal s = sr::signal_from_json(value);
        shortest = signals.empty() ? s.domain_end() : std::min(shortest, s.domain_end());
        signals.emplace(name, std::move(s));
    }
    const sr::Formula f = sr::parse_formula(formula);
    const double h = horizon.value_or(shortest);
    if (!(h > 0.0)) {
        throw sr::ConfigError("horizon must be positive");
    }
    return sr::signal_to_json(sr::eval_formula(signals, f, h).signal).dump();
}

std::string until(const std::string& s1, const std::string& s2, double a, double b) {
    return sr::signal_to_json(sr::until_signal(sr::signal_from_json(parse_json(s1, "left signal")),
                                               sr::signal_from_json(parse_json(s2, "right signal")), a, b))
        .dump();
}

std::string simulate(const std::string& config) {
    const sr::Scenario sc = sr::parse_scenario(parse_json(config, "config"));
    return sr::tube_to_json(sr::compute_tube_init(sc.model, sc.initial_box, sc.horizon, sc.ctrl)).dump();
}

std::string verify(const std::string& config) {
    const sr::Scenario sc = sr::parse_scenario(parse_json(config, "config"));
    sr::VerificationResult r;
    {
        py::gil_scoped_release release;
        r = sr::verify_scenario(sc);
    }
    json out = sr::verification_to_json(sc, r);
    out["root_signal"] = sr::signal_to_json(r.verdict.signal);
    out["root_signal_initial"] = sr::signal_to_json(r.initial_signal);
    return out.dump();
}

std::string repr(const sr::Interval& x) {
    std::ostringstream s;
    s << "Interval" << x;
    return s.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interval reachability and three-valued STL monitoring";

    auto base = py::register_exception<sr::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<sr::ParseError>(m, "ParseError", base.ptr());
    py::register_exception<sr::BindingError>(m, "BindingError", base.ptr());
    py::register_exception<sr::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<sr::UsageError>(m, "UsageError", base.ptr());
    py::register_exception<sr::IntegrationStalled>(m, "IntegrationStalled", base.ptr());
    py::register_exception<sr::StepTooLarge>(m, "StepTooLarge", base.ptr());
    py::register_exception<sr::EvaluationError>(m, "EvaluationError", base.ptr());

    py::class_<sr::Interval>(m, "Interval")
        .def(py::init<double>())
        .def(py::init<double, double>())
        .def_property_readonly("lo", &sr::Interval::lo)
        .def_property_readonly("hi", &sr::Interval::hi)
        .def("width", &sr::Interval::width)
        .def("mid", &sr::Interval::mid)
        .def("is_empty", &sr::Interval::is_empty)
        .def("contains", &sr::Interval::contains)
        .def(-py::self)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self / py::self)
        .def(py::self == py::self)
        .def("__repr__", &repr);
    m.def("exp", [](const sr::Interval& x) { return sr::exp(x); });
    m.def("sin", [](const sr::Interval& x) { return sr::sin(x); });
    m.def("cos", [](const sr::Interval& x) { return sr::cos(x); });
    m.def("log", [](const sr::Interval& x) { return sr::log(x); });
    m.def("hull", [](const sr::Interval& a, const sr::Interval& b) { return sr::hull(a, b); });

    m.def("format_formula", [](const std::string& text) { return sr::to_string(sr::parse_formula(text)); });
    m.def("rewrite_formula", [](const std::string& text) { return sr::to_string(sr::rewrite_derived(sr::parse_formula(text))); });
    m.def("minimal_horizon", [](const std::string& text) { return sr::minimal_horizon(sr::parse_formula(text)); });

    m.def("_eval_signals", &eval_signals, py::arg("formula"), py::arg("signals"), py::arg("horizon") = py::none());
    m.def("_until", &until);
    m.def("_simulate", &simulate);
    m.def("_verify", &verify);
}
