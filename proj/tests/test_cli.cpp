#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "costep/analysis/analysis.hpp"
#include "costep/cli/commands.hpp"
#include "costep/cli/config.hpp"
#include "costep/cli/csv.hpp"
#include "costep/cli/experiments.hpp"
#include "costep/orchestrator/orchestrator.hpp"

using namespace costep;
using doctest::Approx;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("costep_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

template <typename Fn>
std::string config_error_message(Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    FAIL("expected a ConfigError");
    return {};
}

constexpr const char* kOscillatorConfig = R"(# oscillator with one step-size change
[model]
kind = oscillator
m = 1.0
v2_0 = 1.0

[controller]
kind = scheduled
piece = 0.0 0.1
piece = 0.2 0.01

[run]
t_end = 4.0
)";

}  // namespace

TEST_CASE("format_double round-trips doubles through text") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double value = std::ldexp(dist(rng), i % 40 - 20);
        CHECK(std::stod(format_double(value)) == value);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("config parser: a full oscillator config") {
    std::istringstream in(kOscillatorConfig);
    const ExperimentConfig config = parse_experiment_config(in, "osc.cfg");
    const auto& setup = std::get<OscillatorSetup>(config.model);
    CHECK(setup.v2_0 == 1.0);
    CHECK(setup.k == 1.0);  // default
    CHECK(config.controller.kind == ControllerSpec::Kind::scheduled);
    REQUIRE(config.controller.schedule.pieces.size() == 2);
    CHECK(config.controller.schedule.pieces[1].from_time == 0.2);
    CHECK(config.t_end == 4.0);
}

TEST_CASE("config parser: errors are line-anchored") {
    SUBCASE("unknown key") {
        std::istringstream in("[model]\nkind = oscillator\nC = 1.0\n"
                              "[controller]\nkind = fixed\n[run]\nt_end = 1\n");
        const std::string message =
            config_error_message([&] { parse_experiment_config(in, "bad.cfg"); });
        CHECK(message.find("bad.cfg:3") != std::string::npos);
        CHECK(message.find("unknown key 'C'") != std::string::npos);
    }
    SUBCASE("unknown section") {
        std::istringstream in("[nope]\nx = 1\n");
        const std::string message =
            config_error_message([&] { parse_experiment_config(in, "bad.cfg"); });
        CHECK(message.find("bad.cfg:1") != std::string::npos);
    }
    SUBCASE("bad number") {
        std::istringstream in("[model]\nkind = oscillator\nm = fast\n"
                              "[controller]\nkind = fixed\n[run]\nt_end = 1\n");
        const std::string message =
            config_error_message([&] { parse_experiment_config(in, "bad.cfg"); });
        CHECK(message.find("bad.cfg:3") != std::string::npos);
    }
    SUBCASE("missing t_end") {
        std::istringstream in("[model]\nkind = oscillator\n[controller]\nkind = fixed\n");
        CHECK_THROWS_AS(parse_experiment_config(in, "bad.cfg"), ConfigError);
    }
    SUBCASE("key outside any section") {
        std::istringstream in("kind = oscillator\n");
        const std::string message =
            config_error_message([&] { parse_experiment_config(in, "bad.cfg"); });
        CHECK(message.find("bad.cfg:1") != std::string::npos);
    }
}

TEST_CASE("config parser: reservoir events") {
    std::istringstream in(
        "[model]\nkind = reservoirs\n[controller]\nkind = bangbang\n"
        "[run]\nt_end = 5\n[events]\nadd = 1.0 S1 V1 1.0\n");
    const ExperimentConfig config = parse_experiment_config(in, "res.cfg");
    REQUIRE(config.events.size() == 1);
    CHECK(config.events[0].time == 1.0);
    CHECK(config.events[0].unit_id == "S1");
    CHECK(config.events[0].state_name == "V1");
    CHECK(config.events[0].amount == 1.0);
    CHECK(config.controller.bangbang.monitor.qualified() == "S2.y2");
}

TEST_CASE("config parser: PI controller keys override the defaults") {
    std::istringstream in(
        "[model]\nkind = oscillator\n"
        "[controller]\nkind = pi\ndt0 = 0.05\nkp = 0.3\nki = 0.15\n"
        "dt_min = 1e-4\ndt_max = 0.08\ntheta_min = 0.5\ntheta_max = 1.1\n"
        "abs_tol = 1e-7\nrel_tol = 1e-8\n"
        "[run]\nt_end = 10\n");
    const ExperimentConfig config = parse_experiment_config(in, "pi.cfg");
    const PiControllerParams& pi = config.controller.pi;
    CHECK(pi.dt0 == 0.05);
    CHECK(pi.kp == 0.3);
    CHECK(pi.ki == 0.15);
    CHECK(pi.dt_min == 1e-4);
    CHECK(pi.dt_max == 0.08);
    CHECK(pi.theta_min == 0.5);
    CHECK(pi.theta_max == 1.1);
    CHECK(pi.abs_tol == 1e-7);
    CHECK(pi.rel_tol == 1e-8);
    CHECK_NOTHROW(build_experiment(config));
}

TEST_CASE("builtin registry covers the documented experiments") {
    const std::vector<std::string> expected{
        "osc-fixed",        "osc-fixed-v1",        "osc-scheduled", "osc-pi",
        "reservoirs-fixed", "reservoirs-bangbang", "general-poly"};
    for (const std::string& name : expected) {
        CAPTURE(name);
        CHECK(find_builtin(name).has_value());
    }
    CHECK(!find_builtin("nope").has_value());

    std::ostringstream out;
    CHECK(cmd_list(out) == 0);
    for (const std::string& name : expected) {
        CHECK(out.str().find(name) != std::string::npos);
    }
}

TEST_CASE("cmd_run: builtin experiment writes the three outputs") {
    TempDir dir;
    std::ostringstream err;
    REQUIRE(cmd_run("osc-fixed", dir.path.string(), err) == 0);
    CHECK(err.str().empty());
    CHECK(fs::exists(dir.path / "trace.csv"));
    CHECK(fs::exists(dir.path / "discrepancy.csv"));
    CHECK(fs::exists(dir.path / "summary.txt"));

    const std::string summary = slurp(dir.path / "summary.txt");
    CHECK(summary.find("experiment = osc-fixed") != std::string::npos);
    CHECK(summary.find("fixed_step_limit = 0") != std::string::npos);
    CHECK(summary.find("steps = 400") != std::string::npos);

    const std::string trace = slurp(dir.path / "trace.csv");
    CHECK(trace.substr(0, trace.find('\n')) ==
          "n,t,dt,S1.u1,S2.u2,S1.y1,S2.y2,S1.x1,S2.v2,S2.x2");
    CHECK(trace.find("\r\n") == std::string::npos);  // LF only
}

TEST_CASE("cmd_run: byte-identical outputs across invocations") {
    TempDir dir_a;
    TempDir dir_b;
    std::ostringstream err;
    REQUIRE(cmd_run("reservoirs-bangbang", dir_a.path.string(), err) == 0);
    REQUIRE(cmd_run("reservoirs-bangbang", dir_b.path.string(), err) == 0);
    CHECK(slurp(dir_a.path / "trace.csv") == slurp(dir_b.path / "trace.csv"));
    CHECK(slurp(dir_a.path / "discrepancy.csv") == slurp(dir_b.path / "discrepancy.csv"));
    CHECK(slurp(dir_a.path / "summary.txt") == slurp(dir_b.path / "summary.txt"));
}

TEST_CASE("cmd_run: a config file runs like its builtin counterpart") {
    TempDir dir;
    const fs::path config_path = dir.path / "osc.cfg";
    {
        std::ofstream out(config_path);
        out << kOscillatorConfig;
    }
    std::ostringstream err;
    REQUIRE(cmd_run(config_path.string(), (dir.path / "out").string(), err) == 0);
    const std::string summary = slurp(dir.path / "out" / "summary.txt");
    CHECK(summary.find("controller = scheduled") != std::string::npos);
    CHECK(summary.find("single_change_limit") != std::string::npos);
}

TEST_CASE("cmd_run: exit code 2 for config problems") {
    TempDir dir;
    std::ostringstream err;
    CHECK(cmd_run("no-such-experiment", dir.path.string(), err) == 2);
    CHECK(!err.str().empty());

    const fs::path bad = dir.path / "bad.cfg";
    {
        std::ofstream out(bad);
        out << "[model]\nkind = oscillator\nbogus = 1\n"
            << "[controller]\nkind = fixed\n[run]\nt_end = 1\n";
    }
    std::ostringstream err2;
    CHECK(cmd_run(bad.string(), dir.path.string(), err2) == 2);
    CHECK(err2.str().find("bad.cfg:3") != std::string::npos);
}

TEST_CASE("cmd_predict: constant flow predicts zero everywhere") {
    TempDir dir;
    const fs::path csv = dir.path / "flow.csv";
    {
        std::ofstream out(csv);
        out << "t,q\n0,2.5\n0.1,2.5\n0.3,2.5\n";
    }
    std::ostringstream err;
    REQUIRE(cmd_predict(csv.string(), dir.path.string(), err) == 0);
    // t columns reprint with 17 significant digits.
    const std::string predicted = slurp(dir.path / "predicted.csv");
    CHECK(predicted == "t,predicted_leading,predicted_regrouped\n"
                       "0,0,0\n"
                       "0.10000000000000001,0,0\n"
                       "0.29999999999999999,0,0\n");
}

TEST_CASE("cmd_predict: a two-row CSV is the single-step formula") {
    TempDir dir;
    const fs::path csv = dir.path / "flow.csv";
    {
        std::ofstream out(csv);
        out << "0,1\n0.5,2\n";  // headerless is accepted
    }
    std::ostringstream err;
    REQUIRE(cmd_predict(csv.string(), dir.path.string(), err) == 0);
    const std::string predicted = slurp(dir.path / "predicted.csv");
    // -1/2·(q1 - q0)·dt = -0.25
    CHECK(predicted.find("\n0.5,-0.25,-0.25\n") != std::string::npos);
}

TEST_CASE("cmd_predict: exit code 2 for malformed CSV") {
    TempDir dir;
    const fs::path csv = dir.path / "flow.csv";
    {
        std::ofstream out(csv);
        out << "t,q\n0,1\nbroken-line\n";
    }
    std::ostringstream err;
    CHECK(cmd_predict(csv.string(), dir.path.string(), err) == 2);
    CHECK(err.str().find("flow.csv:3") != std::string::npos);
    std::ostringstream err2;
    CHECK(cmd_predict((dir.path / "missing.csv").string(), dir.path.string(), err2) == 2);
}

TEST_CASE("COSTEP_OUT supplies the default output directory") {
    ::setenv("COSTEP_OUT", "/tmp/costep_env_dir", 1);
    CHECK(default_output_dir() == "/tmp/costep_env_dir");
    ::unsetenv("COSTEP_OUT");
    CHECK(default_output_dir() == "costep_out");
}

TEST_CASE("cross-tool round trip: predict on an exported flow equals in-process analysis") {
    TempDir dir;
    std::ostringstream err;
    REQUIRE(cmd_run("osc-fixed-v1", dir.path.string(), err) == 0);

    // Extract (t, S2.y2) from the trace and feed it back through cmd_predict.
    std::ifstream trace_in(dir.path / "trace.csv");
    std::string line;
    std::getline(trace_in, line);  // header checked elsewhere
    const fs::path flow_csv = dir.path / "flow.csv";
    std::vector<double> ts;
    {
        std::ofstream out(flow_csv, std::ios::binary);
        out << "t,q\n";
        while (std::getline(trace_in, line)) {
            // columns: n,t,dt,S1.u1,S2.u2,S1.y1,S2.y2,...
            std::istringstream cells(line);
            std::string cell;
            std::vector<std::string> row;
            while (std::getline(cells, cell, ',')) row.push_back(cell);
            out << row[1] << ',' << row[6] << '\n';
            ts.push_back(std::stod(row[1]));
        }
    }
    REQUIRE(cmd_predict(flow_csv.string(), dir.path.string(), err) == 0);

    // The exported prediction must match the in-process discrepancy series.
    const ExperimentConfig config = *find_builtin("osc-fixed-v1");
    Experiment experiment = build_experiment(config);
    const Trace trace = run(experiment.model, experiment.run);
    const DiscrepancySeries series = measure_oscillator_discrepancy(trace);

    std::ifstream predicted_in(dir.path / "predicted.csv");
    std::getline(predicted_in, line);
    std::size_t n = 0;
    while (std::getline(predicted_in, line)) {
        std::istringstream cells(line);
        std::string t_text, leading_text, regrouped_text;
        std::getline(cells, t_text, ',');
        std::getline(cells, leading_text, ',');
        std::getline(cells, regrouped_text, ',');
        REQUIRE(n < series.points.size());
        CHECK(std::stod(t_text) == series.points[n].t);
        CHECK(std::stod(leading_text) ==
              Approx(series.points[n].predicted_leading).epsilon(1e-14));
        // The measured discrepancy itself is reproduced to rounding.
        CHECK(std::abs(std::stod(leading_text) - series.points[n].measured) <= 1e-12);
        ++n;
    }
    CHECK(n == series.points.size());
}
