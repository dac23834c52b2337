#pragma once

// SimulationUnit: the contract every co-simulated subsystem implements.
//
// A unit declares named input/output ports and named internal states. Inputs
// start unset; a value written through set_input is held constant
// (zero-order hold) until overwritten. do_step advances the internal states
// by the exact analytic solution of the unit's ODE over [t, t+dt] with the
// held inputs. Units are not copyable and keep no shared state, so disjoint
// units may be stepped from different threads.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "costep/core/types.hpp"

namespace costep {

class SimulationUnit {
public:
    virtual ~SimulationUnit() = default;

    SimulationUnit(const SimulationUnit&) = delete;
    SimulationUnit& operator=(const SimulationUnit&) = delete;

    // Introspection, in declaration order.
    std::vector<std::string> input_names() const;
    std::vector<std::string> output_names() const;
    std::vector<std::string> state_names() const;

    PortRole input_role(const std::string& port) const;
    PortRole output_role(const std::string& port) const;

    bool has_input(const std::string& port) const;
    bool has_output(const std::string& port) const;
    bool has_state(const std::string& name) const;

    bool input_is_set(const std::string& port) const;

    /// Current held value of an input; StateError if it was never set.
    double held_input(const std::string& port) const;

    /// Hold `value` on an input port until the next set_input (ZOH).
    void set_input(const std::string& port, double value);

    /// Advance all internal states to t + dt by the exact step solution.
    /// Requires dt > 0 and every declared input set at least once.
    void do_step(double t, double dt);

    /// Evaluate an output equation with the current states and held inputs.
    double output(const std::string& port) const;

    double state(const std::string& name) const;

    /// Instantaneous state mutation used by scheduled events.
    virtual void add_to_state(const std::string& name, double amount);

protected:
    SimulationUnit() = default;

    void declare_input(std::string name, PortRole role);
    void declare_output(std::string name, PortRole role);
    void declare_state(std::string name, double* storage);

    /// Held value of an input port, for use inside step/output equations.
    double input(const std::string& port) const { return held_input(port); }

    virtual void step_impl(double t, double dt) = 0;
    virtual double output_impl(const std::string& port) const = 0;

private:
    struct InputSlot {
        std::string name;
        PortRole role = PortRole::other;
        std::optional<double> held;
    };
    struct OutputSlot {
        std::string name;
        PortRole role = PortRole::other;
    };
    struct StateSlot {
        std::string name;
        double* storage = nullptr;
    };

    const InputSlot* find_input(const std::string& name) const;
    InputSlot* find_input(const std::string& name);
    const OutputSlot* find_output(const std::string& name) const;
    const StateSlot* find_state(const std::string& name) const;

    std::vector<InputSlot> inputs_;
    std::vector<OutputSlot> outputs_;
    std::vector<StateSlot> states_;
};

}  // namespace costep
