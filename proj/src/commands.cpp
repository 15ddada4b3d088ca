#include "stlreach/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "stlreach/error.hpp"
#include "stlreach/scenario.hpp"
#include "stlreach/serialize.hpp"

namespace stlreach {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(BoolInterval value) noexcept {
    switch (value) {
        case BoolInterval::True:
            return exit_code::kTrue;
        case BoolInterval::False:
            return exit_code::kFalse;
        default:
            return exit_code::kUnknown;
    }
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    f << content;
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

Scenario load_with_overrides(const RunOptions& opts) {
    Scenario sc = load_scenario(opts.config_path);
    if (opts.out_dir) {
        sc.out_dir = *opts.out_dir;
    }
    if (opts.max_iterations) {
        if (*opts.max_iterations < 1) {
            throw ConfigError("--max-iters must be at least 1");
        }
        sc.stop.max_iterations = *opts.max_iterations;
    }
    if (opts.min_width) {
        if (!(*opts.min_width > 0.0)) {
            throw ConfigError("--min-width must be positive");
        }
        sc.stop.min_segment_width = *opts.min_width;
    }
    if (opts.mode) {
        sc.mode = *opts.mode;
    }
    if (opts.export_format) {
        sc.export_format = *opts.export_format;
        if (sc.export_format != "json" && sc.export_format != "csv" && sc.export_format != "both") {
            throw ConfigError("--export must be 'json', 'csv' or 'both'");
        }
    }
    return sc;
}

fs::path prepare_out_dir(const Scenario& sc) {
    fs::path dir(sc.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + sc.out_dir + "': " + ec.message());
    }
    return dir;
}

void export_tube(const fs::path& dir, const std::string& stem, const Tube& tube, const std::string& format) {
    if (format == "csv" || format == "both") {
        write_file(dir / (stem + ".csv"), tube_to_csv(tube));
    }
    if (format == "json" || format == "both") {
        write_json(dir / (stem + ".json"), tube_to_json(tube));
    }
}

json verdict_json(const Scenario& sc, const VerificationResult& r) {
    json history = json::array();
    for (const IterationRecord& it : r.history) {
        history.push_back({{"iteration", it.iteration},
                           {"value", std::string(to_string(it.value))},
                           {"uncertain_duration", it.uncertain_duration},
                           {"final_time", it.final_time},
                           {"segments", it.segments},
                           {"marks", it.marks.ids()}});
    }
    const Verdict& v = r.verdict;
    return {{"verdict", std::string(to_string(v.value))},
            {"iterations", v.iterations},
            {"status", std::string(to_string(v.status))},
            {"residual_markers", v.markers.ids()},
            {"uncertain_duration_initial", r.history.empty() ? 0.0 : r.history.front().uncertain_duration},
            {"uncertain_duration_final", r.history.empty() ? 0.0 : r.history.back().uncertain_duration},
            {"mode", sc.mode == VerifyMode::Monitor ? "monitor" : "verdict"},
            {"formula", sc.formula_text},
            {"minimal_horizon", minimal_horizon(sc.formula)},
            {"window", {r.window.start, r.window.end}},
            {"window_markers", r.window_markers.ids()},
            {"final_time", r.final_tube.final_time},
            {"segments_initial", r.initial_tube.segments.size()},
            {"segments_final", r.final_tube.segments.size()},
            {"history", history}};
}

VerifyOptions verify_options(const Scenario& sc) {
    VerifyOptions vo;
    vo.mode = sc.mode;
    vo.initial_final_time = sc.horizon;
    vo.window_end = sc.window_end;
    return vo;
}

template <class F>
int guarded(std::ostream& err, F body) {
    try {
        return body();
    } catch (const IntegrationStalled& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kIntegrationFailure;
    } catch (const StepTooLarge& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kIntegrationFailure;
    } catch (const EvaluationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kIntegrationFailure;
    } catch (const SoundnessViolation& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_code::kIntegrationFailure;
    } catch (const ParseError& e) {
        err << "formula error: " << e.what() << '\n';
        return exit_code::kConfigError;
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kConfigError;
    }
}

}  // namespace

nlohmann::json verification_to_json(const Scenario& sc, const VerificationResult& r) { return verdict_json(sc, r); }

VerificationResult verify_scenario(const Scenario& sc) {
    return adaptive_verify(sc.model, sc.initial_box, sc.formula, sc.predicates, sc.stop, sc.ctrl, verify_options(sc));
}

int cmd_verify(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario sc = load_with_overrides(opts);
        const fs::path dir = prepare_out_dir(sc);
        VerificationResult r;
        try {
            r = verify_scenario(sc);
        } catch (const VerificationStalled& e) {
            json v = verdict_json(sc, e.partial_result());
            v["status"] = "integration_stalled";
            v["error"] = e.what();
            write_json(dir / "verdict.json", v);
            throw;
        } catch (const IntegrationStalled& e) {
            // the initial tube already failed
            VerificationResult partial;
            partial.verdict.value = BoolInterval::Unknown;
            partial.initial_tube = e.partial_tube();
            partial.final_tube = e.partial_tube();
            json v = verdict_json(sc, partial);
            v["status"] = "integration_stalled";
            v["error"] = e.what();
            write_json(dir / "verdict.json", v);
            throw;
        }
        write_json(dir / "verdict.json", verdict_json(sc, r));
        write_json(dir / "root_signal.json", signal_to_json(r.verdict.signal));
        write_json(dir / "root_signal_initial.json", signal_to_json(r.initial_signal));
        export_tube(dir, "tube_initial", r.initial_tube, sc.export_format);
        export_tube(dir, "tube_refined", r.final_tube, sc.export_format);
        out << "verdict: " << to_string(r.verdict.value) << " (" << to_string(r.verdict.status) << ", "
            << r.verdict.iterations << " iterations)\n";
        out << "uncertain duration on [" << r.window.start << ", " << r.window.end
            << "): " << r.history.front().uncertain_duration << " -> " << r.history.back().uncertain_duration << '\n';
        return exit_code_for(r.verdict.value);
    });
}

int cmd_simulate(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario sc = load_with_overrides(opts);
        const fs::path dir = prepare_out_dir(sc);
        const Tube tube = compute_tube_init(sc.model, sc.initial_box, sc.horizon, sc.ctrl);
        export_tube(dir, "tube", tube, sc.export_format);
        out << "tube: " << tube.segments.size() << " segments over [0, " << tube.final_time << ")\n";
        return 0;
    });
}

int cmd_eval_signal(const EvalSignalOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::ifstream in(opts.signals_path);
        if (!in) {
            throw ConfigError("cannot open signals file '" + opts.signals_path + "'");
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("signals file is not valid JSON: " + std::string(e.what()));
        }
        if (!j.is_object() || j.empty()) {
            throw ConfigError("signals file must map predicate names to signal arrays");
        }
        std::map<std::string, IntervalSignal, std::less<>> signals;
        double shortest = 0.0;
        for (const auto& [name, value] : j.items()) {
            IntervalSignal s;
            try {
                s = signal_from_json(value);
            } catch (const ConfigError& e) {
                throw ConfigError("signal '" + name + "': " + e.what());
            }
            if (s.domain_end() == 0.0) {
                throw ConfigError("signal '" + name + "' is empty");
            }
            shortest = signals.empty() ? s.domain_end() : std::min(shortest, s.domain_end());
            signals.emplace(name, std::move(s));
        }
        const Formula f = parse_formula(opts.formula);
        const double horizon = opts.horizon.value_or(shortest);
        if (!(horizon > 0.0)) {
            throw ConfigError("horizon must be positive");
        }
        const SatisfactionTree tree = eval_formula(signals, f, horizon);
        const json root = signal_to_json(tree.signal);
        if (opts.out_path) {
            write_json(*opts.out_path, root);
        } else {
            out << root.dump(2) << '\n';
        }
        return exit_code_for(tree.signal.value_at(0.0));
    });
}

}  // namespace stlreach
