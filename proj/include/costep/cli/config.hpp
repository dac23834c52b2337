#pragma once

// Experiment configuration: a flat, line-oriented "key = value" format with
// [section] headers. Sections: [model], [controller], [run], [events].
// Unknown sections or keys are rejected with a line-anchored message.
//
//   [model]
//   kind = oscillator          # oscillator | reservoirs | general-flow
//   m = 1.0                    # keys depend on the model kind
//
//   [controller]
//   kind = fixed               # fixed | scheduled | bangbang | pi
//   dt = 0.1
//   piece = 0.0 0.1            # scheduled only; repeatable (from_time dt)
//
//   [run]
//   t_start = 0.0
//   t_end = 40.0
//
//   [events]
//   add = 1.0 S1 V1 1.0        # time unit state amount; repeatable

#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "costep/orchestrator/orchestrator.hpp"
#include "costep/stepctl/controllers.hpp"
#include "costep/units/flow.hpp"

namespace costep {

struct OscillatorSetup {
    double m = 1.0;
    double c = 1.0;
    double k = 1.0;
    double x1_0 = 1.0;
    double x2_0 = 1.0;
    double v2_0 = 0.0;
};

struct ReservoirSetup {
    double capacitance = 1.0;  // C
    double resistance = 1.0;   // R
    double v1_0 = 0.6;
    double v2_0 = 0.4;
};

struct GeneralFlowSetup {
    std::vector<double> coeffs{1.0};  // q(t), ascending powers
    double x1_0 = 0.0;
    double x2_0 = 0.0;
};

struct ControllerSpec {
    enum class Kind { fixed, scheduled, bangbang, pi };
    Kind kind = Kind::fixed;
    double dt_fixed = 0.1;
    StepSchedule schedule;
    BangBangParams bangbang;  // monitor defaults to S2.y2
    PiControllerParams pi;
};

struct ExperimentConfig {
    std::string name;
    std::string description;
    std::variant<OscillatorSetup, ReservoirSetup, GeneralFlowSetup> model;
    ControllerSpec controller;
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<Event> events;
};

/// Parses the config format above; `name` anchors error messages
/// ("name:line: ...") and becomes the experiment name.
ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name);

/// A runnable experiment: the wired model, its controller, and run settings.
struct Experiment {
    Model model;
    std::unique_ptr<StepController> controller;
    RunConfig run;
};

Experiment build_experiment(const ExperimentConfig& config);

const char* model_kind_name(const ExperimentConfig& config);
const char* controller_kind_name(ControllerSpec::Kind kind);

}  // namespace costep
