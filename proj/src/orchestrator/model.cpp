#include "costep/orchestrator/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace costep {

SimulationUnit& Model::add_unit(std::string id, std::unique_ptr<SimulationUnit> unit) {
    if (id.empty()) throw ConfigError("unit id must not be empty");
    if (!unit) throw ConfigError("unit '" + id + "' is null");
    if (has_unit(id)) throw ConfigError("duplicate unit id '" + id + "'");
    units_.emplace_back(std::move(id), std::move(unit));
    return *units_.back().second;
}

void Model::connect(PortRef source, PortRef dest) {
    connections_.push_back(Connection{std::move(source), std::move(dest)});
}

void Model::add_bond(PowerBond bond) {
    bonds_.push_back(std::move(bond));
}

void Model::add_event(Event event) {
    events_.push_back(std::move(event));
}

bool Model::has_unit(const std::string& id) const {
    return std::any_of(units_.begin(), units_.end(),
                       [&](const auto& entry) { return entry.first == id; });
}

SimulationUnit& Model::unit(const std::string& id) {
    for (auto& [unit_id, unit] : units_) {
        if (unit_id == id) return *unit;
    }
    throw ConfigError("unknown unit '" + id + "'");
}

const SimulationUnit& Model::unit(const std::string& id) const {
    for (const auto& [unit_id, unit] : units_) {
        if (unit_id == id) return *unit;
    }
    throw ConfigError("unknown unit '" + id + "'");
}

void Model::validate_connection(const Connection& connection) const {
    const PortRef& src = connection.source;
    const PortRef& dst = connection.dest;
    if (src.direction != PortDirection::output) {
        throw ConfigError("connection source " + src.qualified() + " must be an output");
    }
    if (dst.direction != PortDirection::input) {
        throw ConfigError("connection destination " + dst.qualified() + " must be an input");
    }
    if (src.unit_id == dst.unit_id) {
        throw ConfigError("self-connection on unit '" + src.unit_id + "' is not allowed");
    }
    const SimulationUnit& source_unit = unit(src.unit_id);
    const SimulationUnit& dest_unit = unit(dst.unit_id);
    if (!source_unit.has_output(src.port_name)) {
        throw ConfigError("unit '" + src.unit_id + "' has no output '" + src.port_name + "'");
    }
    if (!dest_unit.has_input(dst.port_name)) {
        throw ConfigError("unit '" + dst.unit_id + "' has no input '" + dst.port_name + "'");
    }
    const PortRole source_role = source_unit.output_role(src.port_name);
    const PortRole dest_role = dest_unit.input_role(dst.port_name);
    if (source_role != src.role || dest_role != dst.role) {
        throw ConfigError("connection " + src.qualified() + " -> " + dst.qualified() +
                          " declares roles that do not match the units");
    }
    if (source_role != dest_role) {
        throw ConfigError("connection " + src.qualified() + " -> " + dst.qualified() +
                          " couples a " + to_string(source_role) + " output to a " +
                          to_string(dest_role) + " input");
    }
}

void Model::validate() const {
    for (const Connection& connection : connections_) {
        validate_connection(connection);
    }

    // Every input port must be fed by exactly one connection.
    std::map<std::string, int> coverage;
    for (const auto& [unit_id, unit] : units_) {
        for (const std::string& port : unit->input_names()) {
            coverage[unit_id + "." + port] = 0;
        }
    }
    for (const Connection& connection : connections_) {
        ++coverage[connection.dest.qualified()];
    }
    for (const auto& [port, count] : coverage) {
        if (count == 0) {
            throw ConfigError("input port " + port + " is not covered by any connection");
        }
        if (count > 1) {
            throw ConfigError("input port " + port + " is covered by " +
                              std::to_string(count) + " connections");
        }
    }

    const auto matches_existing = [&](const Connection& candidate) {
        return std::any_of(connections_.begin(), connections_.end(), [&](const Connection& c) {
            return c.source == candidate.source && c.dest == candidate.dest;
        });
    };
    for (const PowerBond& bond : bonds_) {
        validate_connection(bond.effort);
        validate_connection(bond.flow);
        if (bond.effort.source.role != PortRole::effort ||
            bond.flow.source.role != PortRole::flow) {
            throw ConfigError("power bond must pair an effort connection with a flow connection");
        }
        if (bond.effort.source.unit_id != bond.flow.dest.unit_id ||
            bond.effort.dest.unit_id != bond.flow.source.unit_id) {
            throw ConfigError(
                "power bond connections must run in opposite directions between one unit pair");
        }
        if (!matches_existing(bond.effort) || !matches_existing(bond.flow)) {
            throw ConfigError("power bond references a connection that is not part of the model");
        }
    }

    for (const Event& event : events_) {
        if (!std::isfinite(event.time)) throw ConfigError("event time must be finite");
        const SimulationUnit& target = unit(event.unit_id);
        if (!target.has_state(event.state_name)) {
            throw ConfigError("event targets unknown state '" + event.unit_id + "." +
                              event.state_name + "'");
        }
    }
}

}  // namespace costep
