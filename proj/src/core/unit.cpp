#include "costep/core/unit.hpp"

#include <cmath>

namespace costep {

std::string to_string(PortDirection direction) {
    return direction == PortDirection::input ? "input" : "output";
}

std::string to_string(PortRole role) {
    switch (role) {
        case PortRole::effort: return "effort";
        case PortRole::flow: return "flow";
        default: return "other";
    }
}

std::vector<std::string> SimulationUnit::input_names() const {
    std::vector<std::string> names;
    names.reserve(inputs_.size());
    for (const auto& slot : inputs_) names.push_back(slot.name);
    return names;
}

std::vector<std::string> SimulationUnit::output_names() const {
    std::vector<std::string> names;
    names.reserve(outputs_.size());
    for (const auto& slot : outputs_) names.push_back(slot.name);
    return names;
}

std::vector<std::string> SimulationUnit::state_names() const {
    std::vector<std::string> names;
    names.reserve(states_.size());
    for (const auto& slot : states_) names.push_back(slot.name);
    return names;
}

PortRole SimulationUnit::input_role(const std::string& port) const {
    const auto* slot = find_input(port);
    if (!slot) throw ConfigError("unknown input port '" + port + "'");
    return slot->role;
}

PortRole SimulationUnit::output_role(const std::string& port) const {
    const auto* slot = find_output(port);
    if (!slot) throw ConfigError("unknown output port '" + port + "'");
    return slot->role;
}

bool SimulationUnit::has_input(const std::string& port) const {
    return find_input(port) != nullptr;
}

bool SimulationUnit::has_output(const std::string& port) const {
    return find_output(port) != nullptr;
}

bool SimulationUnit::has_state(const std::string& name) const {
    return find_state(name) != nullptr;
}

bool SimulationUnit::input_is_set(const std::string& port) const {
    const auto* slot = find_input(port);
    if (!slot) throw ConfigError("unknown input port '" + port + "'");
    return slot->held.has_value();
}

double SimulationUnit::held_input(const std::string& port) const {
    const auto* slot = find_input(port);
    if (!slot) throw ConfigError("unknown input port '" + port + "'");
    if (!slot->held) throw StateError("input '" + port + "' has not been set");
    return *slot->held;
}

void SimulationUnit::set_input(const std::string& port, double value) {
    auto* slot = find_input(port);
    if (!slot) throw ConfigError("unknown input port '" + port + "'");
    if (!std::isfinite(value)) {
        throw ArgumentError("input '" + port + "' must be finite");
    }
    slot->held = value;
}

void SimulationUnit::do_step(double t, double dt) {
    if (!std::isfinite(dt) || dt <= 0.0) {
        throw ArgumentError("macro step size must be positive and finite, got " +
                            std::to_string(dt));
    }
    if (!std::isfinite(t)) throw ArgumentError("step start time must be finite");
    for (const auto& slot : inputs_) {
        if (!slot.held) {
            throw StateError("cannot step: input '" + slot.name + "' has not been set");
        }
    }
    step_impl(t, dt);
}

double SimulationUnit::output(const std::string& port) const {
    if (!find_output(port)) throw ConfigError("unknown output port '" + port + "'");
    return output_impl(port);
}

double SimulationUnit::state(const std::string& name) const {
    const auto* slot = find_state(name);
    if (!slot) throw ConfigError("unknown state '" + name + "'");
    return *slot->storage;
}

void SimulationUnit::add_to_state(const std::string& name, double amount) {
    const auto* slot = find_state(name);
    if (!slot) throw ConfigError("unknown state '" + name + "'");
    if (!std::isfinite(amount)) throw ArgumentError("state increment must be finite");
    *slot->storage += amount;
}

void SimulationUnit::declare_input(std::string name, PortRole role) {
    if (find_input(name)) throw ConfigError("duplicate input port '" + name + "'");
    inputs_.push_back(InputSlot{std::move(name), role, std::nullopt});
}

void SimulationUnit::declare_output(std::string name, PortRole role) {
    if (find_output(name)) throw ConfigError("duplicate output port '" + name + "'");
    outputs_.push_back(OutputSlot{std::move(name), role});
}

void SimulationUnit::declare_state(std::string name, double* storage) {
    if (find_state(name)) throw ConfigError("duplicate state '" + name + "'");
    states_.push_back(StateSlot{std::move(name), storage});
}

const SimulationUnit::InputSlot* SimulationUnit::find_input(const std::string& name) const {
    for (const auto& slot : inputs_) {
        if (slot.name == name) return &slot;
    }
    return nullptr;
}

SimulationUnit::InputSlot* SimulationUnit::find_input(const std::string& name) {
    for (auto& slot : inputs_) {
        if (slot.name == name) return &slot;
    }
    return nullptr;
}

const SimulationUnit::OutputSlot* SimulationUnit::find_output(const std::string& name) const {
    for (const auto& slot : outputs_) {
        if (slot.name == name) return &slot;
    }
    return nullptr;
}

const SimulationUnit::StateSlot* SimulationUnit::find_state(const std::string& name) const {
    for (const auto& slot : states_) {
        if (slot.name == name) return &slot;
    }
    return nullptr;
}

}  // namespace costep
