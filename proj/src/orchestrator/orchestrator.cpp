#include "costep/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace costep {

namespace {

// Slack (relative to the stop time's magnitude) for deciding that a step
// reaches the next stop (event time or t_end); absorbs ulp drift in the
// accumulated t. The same slack decides landing, so a step that would end
// within match range of a stop is always clamped onto it.
constexpr double kStopSlack = 1e-9;

double stop_slack(double stop) {
    return kStopSlack * std::max(1.0, std::abs(stop));
}

// A run is considered complete when less than this (relative) distance to
// t_end remains.
constexpr double kEndSlack = 1e-12;

constexpr std::size_t kMaxSteps = 50'000'000;

bool times_match(double t, double target) {
    return std::abs(t - target) <= stop_slack(target);
}

/// One output-read/exchange pass; outputs whose feedthrough inputs are still
/// unset are skipped. Returns true if any held input changed.
bool exchange_pass(Model& model) {
    bool changed = false;
    for (const Connection& connection : model.connections()) {
        double value;
        try {
            value = model.unit(connection.source.unit_id).output(connection.source.port_name);
        } catch (const StateError&) {
            continue;
        }
        SimulationUnit& dest = model.unit(connection.dest.unit_id);
        const std::string& port = connection.dest.port_name;
        if (!dest.input_is_set(port) || dest.held_input(port) != value) {
            dest.set_input(port, value);
            changed = true;
        }
    }
    return changed;
}

/// Dependency-ordered consistent exchange: sweeps until the exchanged values
/// settle. Used for the t_start handshake and after event mutations.
void exchange_consistent(Model& model) {
    const std::size_t max_passes = model.connections().size() + 2;
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        if (!exchange_pass(model)) {
            for (const Connection& connection : model.connections()) {
                const SimulationUnit& dest = model.unit(connection.dest.unit_id);
                if (!dest.input_is_set(connection.dest.port_name)) {
                    throw ConfigError("input " + connection.dest.qualified() +
                                      " could not be initialized; its source output depends on "
                                      "an unset input (algebraic loop)");
                }
            }
            return;
        }
    }
    throw ConfigError("input exchange did not settle; the model contains an algebraic "
                      "feedthrough loop");
}

std::map<std::string, double> read_all_outputs(const Model& model) {
    std::map<std::string, double> values;
    for (const auto& [unit_id, unit] : model.units()) {
        for (const std::string& port : unit->output_names()) {
            values[unit_id + "." + port] = unit->output(port);
        }
    }
    return values;
}

TraceRow make_row(std::size_t index, double t, const Model& model, const RunConfig& config,
                  std::map<std::string, double> outputs) {
    TraceRow row;
    row.index = index;
    row.t = t;
    row.dt = 0.0;
    row.outputs = std::move(outputs);
    for (const auto& [unit_id, unit] : model.units()) {
        for (const std::string& port : unit->input_names()) {
            row.inputs[unit_id + "." + port] = unit->held_input(port);
        }
    }
    if (config.record_states.empty()) {
        for (const auto& [unit_id, unit] : model.units()) {
            for (const std::string& name : unit->state_names()) {
                row.states[unit_id + "." + name] = unit->state(name);
            }
        }
    } else {
        for (const auto& [unit_id, name] : config.record_states) {
            row.states[unit_id + "." + name] = model.unit(unit_id).state(name);
        }
    }
    return row;
}

void step_all_units(Model& model, double t, double dt) {
    for (const auto& [unit_id, unit] : model.units()) {
        try {
            unit->do_step(t, dt);
        } catch (const StateError& e) {
            throw StateError("unit '" + unit_id + "': " + e.what());
        } catch (const ArgumentError& e) {
            throw ArgumentError("unit '" + unit_id + "': " + e.what());
        }
    }
}

}  // namespace

void initialize(Model& model) {
    model.validate();
    exchange_consistent(model);
}

Trace run(Model& model, const RunConfig& config) {
    if (!config.controller) throw ConfigError("run config has no step controller");
    if (!std::isfinite(config.t_start) || !std::isfinite(config.t_end)) {
        throw ConfigError("run horizon must be finite");
    }
    if (config.t_end < config.t_start) {
        throw ConfigError("t_end must not precede t_start");
    }

    std::vector<Event> pending = model.events();
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });
    for (const Event& event : pending) {
        if (event.time <= config.t_start || event.time > config.t_end) {
            throw ConfigError("event at t = " + std::to_string(event.time) +
                              " lies outside (t_start, t_end]");
        }
    }

    initialize(model);

    Trace trace;
    trace.append(make_row(0, config.t_start, model, config, read_all_outputs(model)));

    double t = config.t_start;
    std::size_t n = 0;
    std::size_t next_event = 0;
    const double end_slack = kEndSlack * std::max(1.0, std::abs(config.t_end));

    while (config.t_end - t > end_slack) {
        const double proposed = config.controller->next_dt(trace);
        if (!std::isfinite(proposed) || proposed <= 0.0) {
            throw ControllerError("step controller proposed a non-positive step size at t = " +
                                  std::to_string(t));
        }

        const double stop =
            next_event < pending.size() ? std::min(pending[next_event].time, config.t_end)
                                        : config.t_end;
        const double remaining = stop - t;
        double dt = proposed;
        if (remaining - proposed <= stop_slack(stop)) {
            dt = remaining;  // land exactly on the event time or t_end
        }
        if (!(dt > 0.0) || t + dt == t) {
            throw ControllerError("step size underflow at t = " + std::to_string(t));
        }

        trace.set_dt(n, dt);
        step_all_units(model, t, dt);
        t = t + dt;
        ++n;

        bool event_row = false;
        while (next_event < pending.size() && times_match(t, pending[next_event].time)) {
            const Event& event = pending[next_event];
            model.unit(event.unit_id).add_to_state(event.state_name, event.amount);
            ++next_event;
            event_row = true;
        }

        std::map<std::string, double> outputs;
        if (event_row) {
            // Post-event values must flow through before anything samples
            // them: re-exchange until consistent, then record the settled
            // outputs.
            exchange_consistent(model);
            outputs = read_all_outputs(model);
        } else {
            // Regular point: sample with the inputs held over the finished
            // step, then copy outputs to inputs for the next step.
            outputs = read_all_outputs(model);
            for (const Connection& connection : model.connections()) {
                model.unit(connection.dest.unit_id)
                    .set_input(connection.dest.port_name,
                               outputs.at(connection.source.qualified()));
            }
        }
        trace.append(make_row(n, t, model, config, std::move(outputs)));

        if (n >= kMaxSteps) {
            throw ControllerError("step budget exceeded; controller is not advancing the run");
        }
    }
    return trace;
}

}  // namespace costep
