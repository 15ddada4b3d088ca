#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "stlreach/monitor.hpp"
#include "stlreach/scenario.hpp"

namespace stlreach {

namespace exit_code {
inline constexpr int kTrue = 0;
inline constexpr int kFalse = 1;
inline constexpr int kUnknown = 2;
inline constexpr int kConfigError = 3;
inline constexpr int kIntegrationFailure = 4;
}  // namespace exit_code

int exit_code_for(BoolInterval value) noexcept;

// Command-line overrides; unset fields keep the config values.
struct RunOptions {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<int> max_iterations;
    std::optional<double> min_width;
    std::optional<VerifyMode> mode;
    std::optional<std::string> export_format;
};

// The adaptive loop with the scenario's settings, without touching the filesystem.
VerificationResult verify_scenario(const Scenario& sc);
// Contents of verdict.json.
nlohmann::json verification_to_json(const Scenario& sc, const VerificationResult& r);

// Runs the adaptive loop and writes verdict.json, root_signal.json, root_signal_initial.json and
// tube_{initial,refined}.{csv,json}. Returns the exit code; diagnostics go to err.
int cmd_verify(const RunOptions& opts, std::ostream& out, std::ostream& err);

// Computes the tube up to the configured horizon and writes tube.{csv,json}.
int cmd_simulate(const RunOptions& opts, std::ostream& out, std::ostream& err);

struct EvalSignalOptions {
    std::string signals_path;
    std::string formula;
    std::optional<double> horizon;      // default: shortest input domain
    std::optional<std::string> out_path;  // default: root signal JSON on out
};

int cmd_eval_signal(const EvalSignalOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace stlreach
