#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "stlreach/commands.hpp"
#include "stlreach/error.hpp"
#include "stlreach/scenario.hpp"
#include "stlreach/serialize.hpp"

using namespace stlreach;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "stlreach-tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json base_config() {
    return json::parse(R"({
      "system": {"rhs": ["0"]},
      "initial_box": [[0.0, 0.5]],
      "predicates": {"p": {"region": [[-1, 1]]}},
      "formula": "G[0,1] p",
      "horizon": 2
    })");
}

std::string write_config(const fs::path& dir, const json& j) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int verify(const json& cfg, const fs::path& dir, std::string* err_text = nullptr) {
    RunOptions o;
    o.config_path = write_config(dir, cfg);
    o.out_dir = (dir / "out").string();
    std::ostringstream out, err;
    const int rc = cmd_verify(o, out, err);
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST_CASE("scenario parsing") {
    const Scenario sc = parse_scenario(base_config());
    CHECK(sc.model.dim() == 1);
    CHECK(sc.horizon == 2.0);
    CHECK(sc.mode == VerifyMode::Verdict);
    CHECK(sc.stop.max_final_time == 2.0);
    CHECK(sc.ctrl.refine_order == sc.ctrl.order);

    auto rejects = [](json j) { CHECK_THROWS_AS(parse_scenario(j), ConfigError); };
    json j = base_config();
    j["horizon"] = 0;
    rejects(j);
    j = base_config();
    j["extra"] = 1;
    rejects(j);
    j = base_config();
    j["_note"] = "comments are fine";
    CHECK_NOTHROW(parse_scenario(j));
    j = base_config();
    j.erase("formula");
    rejects(j);
    j = base_config();
    j["initial_box"] = json::parse("[[1, 0]]");
    rejects(j);
    j = base_config();
    j["initial_box"] = json::parse("[[0, 1], [0, 1]]");
    rejects(j);
    j = base_config();
    j["predicates"]["p"]["polarity"] = "sideways";
    rejects(j);
    j = base_config();
    j["step_control"] = {{"order", 0}};
    rejects(j);
    j = base_config();
    j["stop"] = {{"max_iterations", 0}};
    rejects(j);
    j = base_config();
    j["mode"] = "live";
    rejects(j);
    j = base_config();
    j["system"] = {{"builtin", "vanderpol"}, {"rhs", json::array({"0"})}};
    rejects(j);
    j = base_config();
    j["formula"] = "G[0,1] r";
    CHECK_THROWS_AS(parse_scenario(j), BindingError);
    j = base_config();
    j["formula"] = "G[0,1 p";
    CHECK_THROWS_AS(parse_scenario(j), ParseError);
}

TEST_CASE("signal json round trip and validation") {
    const IntervalSignal s({{{0, 1}, BoolInterval::True, {}}, {{1, 2.5}, BoolInterval::Unknown, MarkerSet{-1, 4}}});
    CHECK(signal_from_json(signal_to_json(s)) == s);
    CHECK_THROWS_AS(signal_from_json(json::parse(R"([{"t_start":0,"t_end":1,"markers":[]}])")), ConfigError);
    CHECK_THROWS_AS(
        signal_from_json(json::parse(
            R"([{"t_start":0,"t_end":2,"value":"true","markers":[]},{"t_start":1,"t_end":3,"value":"false","markers":[]}])")),
        ConfigError);
    CHECK_THROWS_AS(signal_from_json(json::parse(R"([{"t_start":0,"t_end":1,"value":"maybe","markers":[]}])")),
                    ConfigError);
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("verify exit codes") {
    const fs::path dir = scratch("exit");
    CHECK(verify(base_config(), dir) == exit_code::kTrue);
    CHECK(fs::exists(dir / "out" / "verdict.json"));
    CHECK(fs::exists(dir / "out" / "tube_refined.csv"));
    const json v = json::parse(slurp(dir / "out" / "verdict.json"));
    CHECK(v["verdict"] == "true");
    CHECK(v["minimal_horizon"] == 1.0);

    json f = base_config();
    f["predicates"]["p"]["region"] = json::parse("[[2, 3]]");
    CHECK(verify(f, dir) == exit_code::kFalse);

    json u = base_config();
    u["predicates"]["p"]["region"] = json::parse("[[0.25, 3]]");
    CHECK(verify(u, dir) == exit_code::kUnknown);
    CHECK(json::parse(slurp(dir / "out" / "verdict.json"))["status"] != "conclusive");

    json bad = base_config();
    bad["formula"] = "G[0,1] r";
    std::string err;
    CHECK(verify(bad, dir, &err) == exit_code::kConfigError);
    CHECK(err.find("r") != std::string::npos);

    json parse = base_config();
    parse["formula"] = "G[0,1] & p";
    CHECK(verify(parse, dir) == exit_code::kConfigError);

    json stall = base_config();
    stall["system"]["rhs"] = json::array({"y1^2"});
    stall["initial_box"] = json::parse("[[1, 1]]");
    stall["predicates"]["p"]["region"] = json::parse("[[0, 100]]");
    stall["horizon"] = 3;
    stall["step_control"] = {{"h_min", 1e-3}};
    CHECK(verify(stall, dir, &err) == exit_code::kIntegrationFailure);
    CHECK(json::parse(slurp(dir / "out" / "verdict.json"))["status"] == "integration_stalled");

    RunOptions missing;
    missing.config_path = (dir / "nope.json").string();
    std::ostringstream out, e2;
    CHECK(cmd_verify(missing, out, e2) == exit_code::kConfigError);
    std::ofstream(dir / "broken.json") << "{ not json";
    missing.config_path = (dir / "broken.json").string();
    CHECK(cmd_verify(missing, out, e2) == exit_code::kConfigError);
}

TEST_CASE("overrides and simulate") {
    const fs::path dir = scratch("simulate");
    RunOptions o;
    o.config_path = write_config(dir, base_config());
    o.out_dir = (dir / "out").string();
    o.export_format = "csv";
    std::ostringstream out, err;
    CHECK(cmd_simulate(o, out, err) == 0);
    CHECK(fs::exists(dir / "out" / "tube.csv"));
    CHECK_FALSE(fs::exists(dir / "out" / "tube.json"));
    const std::string csv = slurp(dir / "out" / "tube.csv");
    CHECK(csv.rfind("index,t_start,t_end,dim,lo,hi\n", 0) == 0);
    o.export_format = "xml";
    CHECK(cmd_simulate(o, out, err) == exit_code::kConfigError);
    o.export_format.reset();
    o.max_iterations = 0;
    CHECK(cmd_verify(o, out, err) == exit_code::kConfigError);
    o.max_iterations = 3;
    o.mode = VerifyMode::Monitor;
    CHECK(cmd_verify(o, out, err) == 0);
    CHECK(json::parse(slurp(dir / "out" / "verdict.json"))["mode"] == "monitor");
}

TEST_CASE("eval-signal") {
    const fs::path dir = scratch("eval");
    std::ofstream(dir / "s.json") << R"({
      "p": [{"t_start": 0, "t_end": 4, "value": "true", "markers": []}],
      "q": [{"t_start": 0, "t_end": 2, "value": "false", "markers": []},
            {"t_start": 2, "t_end": 4, "value": "unknown", "markers": [3]}]
    })";
    EvalSignalOptions o;
    o.signals_path = (dir / "s.json").string();
    o.formula = "p U[1,2] q";
    std::ostringstream out, err;
    CHECK(cmd_eval_signal(o, out, err) == exit_code::kUnknown);
    const json root = json::parse(out.str());
    CHECK(root[0]["value"] == "unknown");
    CHECK(root[0]["markers"] == json::array({3}));
    o.formula = "p";
    o.out_path = (dir / "root.json").string();
    CHECK(cmd_eval_signal(o, out, err) == exit_code::kTrue);
    CHECK(fs::exists(dir / "root.json"));
    o.formula = "r";
    CHECK(cmd_eval_signal(o, out, err) == exit_code::kConfigError);
    o.formula = "p U[2,1] q";
    CHECK(cmd_eval_signal(o, out, err) == exit_code::kConfigError);
}

TEST_CASE("bundled scenarios load") {
    const fs::path root = STLREACH_SOURCE_DIR;
    for (const char* name : {"vanderpol.json", "decay.json", "constant.json"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_scenario((root / "scenarios" / name).string()));
    }
}

TEST_CASE("decay scenario brackets the closed form") {
    const fs::path dir = scratch("decay");
    RunOptions o;
    o.config_path = (fs::path(STLREACH_SOURCE_DIR) / "scenarios" / "decay.json").string();
    o.out_dir = dir.string();
    std::ostringstream out, err;
    CHECK(cmd_simulate(o, out, err) == 0);
    const json t = json::parse(slurp(dir / "tube.json"));
    const json& last = t["segments"].back();
    CHECK(last["t_end"] == 3.0);
    const double lo = last["endpoint"][0][0];
    const double hi = last["endpoint"][0][1];
    CHECK(lo <= std::exp(-3.0));
    CHECK(std::exp(-3.0) <= hi);
}
