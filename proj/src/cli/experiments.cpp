#include "costep/cli/experiments.hpp"

namespace costep {

namespace {

ExperimentConfig osc_fixed() {
    ExperimentConfig config;
    config.name = "osc-fixed";
    config.description = "damped oscillator, fixed dt = 0.1, v2(0) = 0, t_end = 40";
    config.model = OscillatorSetup{};
    config.controller.kind = ControllerSpec::Kind::fixed;
    config.controller.dt_fixed = 0.1;
    config.t_end = 40.0;
    return config;
}

ExperimentConfig osc_fixed_v1() {
    ExperimentConfig config = osc_fixed();
    config.name = "osc-fixed-v1";
    config.description = "damped oscillator, fixed dt = 0.1, v2(0) = 1, t_end = 40";
    OscillatorSetup setup;
    setup.v2_0 = 1.0;
    config.model = setup;
    return config;
}

ExperimentConfig osc_scheduled() {
    ExperimentConfig config;
    config.name = "osc-scheduled";
    config.description = "damped oscillator, dt = 0.1 until t = 0.2 then 0.01, t_end = 40";
    config.model = OscillatorSetup{};
    config.controller.kind = ControllerSpec::Kind::scheduled;
    config.controller.schedule.pieces = {{0.0, 0.1}, {0.2, 0.01}};
    config.t_end = 40.0;
    return config;
}

ExperimentConfig osc_pi() {
    ExperimentConfig config;
    config.name = "osc-pi";
    config.description = "damped oscillator, energy-residual PI step controller, t_end = 40";
    config.model = OscillatorSetup{};
    config.controller.kind = ControllerSpec::Kind::pi;
    config.t_end = 40.0;
    return config;
}

ExperimentConfig reservoirs_fixed() {
    ExperimentConfig config;
    config.name = "reservoirs-fixed";
    config.description = "connected reservoirs, fixed dt = 0.001, +1 volume at t = 1, t_end = 5";
    config.model = ReservoirSetup{};
    config.controller.kind = ControllerSpec::Kind::fixed;
    config.controller.dt_fixed = 0.001;
    config.t_end = 5.0;
    config.events.push_back(Event{1.0, "S1", "V1", 1.0});
    return config;
}

ExperimentConfig reservoirs_bangbang() {
    ExperimentConfig config = reservoirs_fixed();
    config.name = "reservoirs-bangbang";
    config.description =
        "connected reservoirs, flow-threshold bang-bang controller (0.001/0.01)";
    config.controller.kind = ControllerSpec::Kind::bangbang;
    config.controller.bangbang.monitor = PortRef{"S2", "y2", PortDirection::output,
                                                 PortRole::flow};
    return config;
}

ExperimentConfig general_poly() {
    ExperimentConfig config;
    config.name = "general-poly";
    config.description =
        "polynomial flow source vs ZOH accumulator, dt = 0.1 until t = 2 then 0.05";
    GeneralFlowSetup setup;
    setup.coeffs = {1.0, 2.0, -1.0};  // q(t) = 1 + 2t - t^2
    config.model = setup;
    config.controller.kind = ControllerSpec::Kind::scheduled;
    config.controller.schedule.pieces = {{0.0, 0.1}, {2.0, 0.05}};
    config.t_end = 4.0;
    return config;
}

}  // namespace

const std::vector<ExperimentConfig>& builtin_experiments() {
    static const std::vector<ExperimentConfig> experiments{
        osc_fixed(),        osc_fixed_v1(),     osc_scheduled(), osc_pi(),
        reservoirs_fixed(), reservoirs_bangbang(), general_poly(),
    };
    return experiments;
}

std::optional<ExperimentConfig> find_builtin(const std::string& name) {
    for (const ExperimentConfig& config : builtin_experiments()) {
        if (config.name == name) return config;
    }
    return std::nullopt;
}

}  // namespace costep
