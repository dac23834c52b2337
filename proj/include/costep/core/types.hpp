#pragma once

// Core domain types shared by every module: the error taxonomy, port
// references, connections, power bonds, and scheduled state-mutation events.
// All quantities are dimensionless reals (double precision); simulation time
// and macro step sizes are plain doubles.

#include <stdexcept>
#include <string>

namespace costep {

/// Model wiring or naming problem (unknown port, uncovered input, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value outside its contract (non-positive step size, bad parameter).
class ArgumentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation issued in the wrong lifecycle state (stepping before all
/// inputs were set, reading an output that needs an unset input).
class StateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A step controller produced an unusable step size.
class ControllerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PortDirection { input, output };

// Power-conjugate classification: the product of an effort signal and a flow
// signal over a bond is the transmitted power.
enum class PortRole { effort, flow, other };

std::string to_string(PortDirection direction);
std::string to_string(PortRole role);

struct PortRef {
    std::string unit_id;
    std::string port_name;
    PortDirection direction = PortDirection::output;
    PortRole role = PortRole::other;

    std::string qualified() const { return unit_id + "." + port_name; }

    friend bool operator==(const PortRef&, const PortRef&) = default;
};

/// Wires one unit's output to another unit's input of the same role.
struct Connection {
    PortRef source;  // direction == output
    PortRef dest;    // direction == input
};

/// An effort connection paired with a flow connection running in opposite
/// directions between the same two units.
struct PowerBond {
    Connection effort;
    Connection flow;
};

/// Instantaneous named-state mutation applied when a communication point
/// lands on `time`, e.g. add_to_state("V1", +1.0).
struct Event {
    double time = 0.0;
    std::string unit_id;
    std::string state_name;
    double amount = 0.0;
};

}  // namespace costep
