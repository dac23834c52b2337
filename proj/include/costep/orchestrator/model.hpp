#pragma once

// Model: units, connections between their ports, power bonds for the energy
// residual, and scheduled events. Units are stepped in registration order;
// with Jacobi semantics the order has no observable effect.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "costep/core/types.hpp"
#include "costep/core/unit.hpp"

namespace costep {

class Model {
public:
    SimulationUnit& add_unit(std::string id, std::unique_ptr<SimulationUnit> unit);

    void connect(PortRef source, PortRef dest);
    void add_bond(PowerBond bond);
    void add_event(Event event);

    bool has_unit(const std::string& id) const;
    SimulationUnit& unit(const std::string& id);
    const SimulationUnit& unit(const std::string& id) const;

    const std::vector<std::pair<std::string, std::unique_ptr<SimulationUnit>>>& units() const {
        return units_;
    }
    const std::vector<Connection>& connections() const { return connections_; }
    const std::vector<PowerBond>& bonds() const { return bonds_; }
    const std::vector<Event>& events() const { return events_; }

    /// Checks wiring: ports resolve with matching roles and directions, no
    /// self-connections, every input covered by exactly one connection, and
    /// bonds pair an effort with a flow connection running in opposite
    /// directions between the same unit pair.
    void validate() const;

private:
    void validate_connection(const Connection& connection) const;

    std::vector<std::pair<std::string, std::unique_ptr<SimulationUnit>>> units_;
    std::vector<Connection> connections_;
    std::vector<PowerBond> bonds_;
    std::vector<Event> events_;
};

}  // namespace costep
