#include "costep/core/trace.hpp"

#include <cmath>

namespace costep {

namespace {

template <typename Map>
bool same_keys(const Map& a, const Map& b) {
    if (a.size() != b.size()) return false;
    auto it = b.begin();
    for (const auto& [key, value] : a) {
        (void)value;
        if (it->first != key) return false;
        ++it;
    }
    return true;
}

}  // namespace

void Trace::append(TraceRow row) {
    if (row.index != rows_.size()) {
        throw ArgumentError("trace row index " + std::to_string(row.index) +
                            " does not continue the sequence (expected " +
                            std::to_string(rows_.size()) + ")");
    }
    if (!std::isfinite(row.t)) throw ArgumentError("trace row time must be finite");
    if (!rows_.empty()) {
        const TraceRow& prev = rows_.back();
        if (!(prev.dt > 0.0)) {
            throw ArgumentError("cannot append: step size of row " +
                                std::to_string(prev.index) + " was never set");
        }
        if (row.t != prev.t + prev.dt) {
            throw ArgumentError("trace time chain broken: t[" + std::to_string(row.index) +
                                "] != t[" + std::to_string(prev.index) + "] + dt");
        }
        if (!same_keys(row.inputs, prev.inputs) || !same_keys(row.outputs, prev.outputs) ||
            !same_keys(row.states, prev.states)) {
            throw ArgumentError("trace rows must share one key set");
        }
    }
    rows_.push_back(std::move(row));
}

void Trace::set_dt(std::size_t n, double dt) {
    if (n >= rows_.size()) throw ArgumentError("set_dt: no such trace row");
    if (!std::isfinite(dt) || dt <= 0.0) {
        throw ArgumentError("macro step size must be positive and finite");
    }
    rows_[n].dt = dt;
}

const TraceRow& Trace::row(std::size_t n) const {
    if (n >= rows_.size()) {
        throw ArgumentError("trace row " + std::to_string(n) + " out of range (have " +
                            std::to_string(rows_.size()) + ")");
    }
    return rows_[n];
}

const TraceRow& Trace::back() const {
    if (rows_.empty()) throw ArgumentError("trace is empty");
    return rows_.back();
}

double Trace::dt(std::size_t n) const {
    if (n + 1 >= rows_.size()) {
        throw ArgumentError("no step was taken from trace row " + std::to_string(n));
    }
    return rows_[n].dt;
}

double Trace::input(std::size_t n, const std::string& unit_id, const std::string& port) const {
    return lookup(row(n).inputs, unit_id + "." + port, "input", n);
}

double Trace::output(std::size_t n, const std::string& unit_id, const std::string& port) const {
    return lookup(row(n).outputs, unit_id + "." + port, "output", n);
}

double Trace::state(std::size_t n, const std::string& unit_id, const std::string& name) const {
    return lookup(row(n).states, unit_id + "." + name, "state", n);
}

double Trace::lookup(const std::map<std::string, double>& map, const std::string& key,
                     const char* kind, std::size_t n) {
    const auto it = map.find(key);
    if (it == map.end()) {
        throw ConfigError(std::string("trace row ") + std::to_string(n) + " records no " +
                          kind + " '" + key + "'");
    }
    return it->second;
}

}  // namespace costep
