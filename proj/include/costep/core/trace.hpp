#pragma once

// Trace: the time-indexed record of communication points. Row n stores the
// time t[n], the macro step dt[n] taken from t[n] (0.0 on the final row,
// where no step follows), the inputs as held during step n, the outputs as
// read at t[n], and the recorded states at t[n].

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "costep/core/types.hpp"

namespace costep {

struct TraceRow {
    std::size_t index = 0;
    double t = 0.0;
    double dt = 0.0;
    std::map<std::string, double> inputs;   // "unit.port" -> held value
    std::map<std::string, double> outputs;  // "unit.port" -> sampled value
    std::map<std::string, double> states;   // "unit.state" -> value
};

class Trace {
public:
    /// Appends a row; enforces contiguous indices, a consistent key set, and
    /// t[n+1] == t[n] + dt[n] bit-exactly as computed by the orchestrator.
    void append(TraceRow row);

    /// Records the step size taken from row n (set once the controller has
    /// decided, before the following row is appended).
    void set_dt(std::size_t n, double dt);

    bool empty() const { return rows_.empty(); }
    std::size_t row_count() const { return rows_.size(); }

    /// Number of macro steps actually taken (row_count() - 1).
    std::size_t step_count() const { return rows_.empty() ? 0 : rows_.size() - 1; }

    const TraceRow& row(std::size_t n) const;
    const TraceRow& back() const;

    double t(std::size_t n) const { return row(n).t; }
    double dt(std::size_t n) const;

    double input(std::size_t n, const std::string& unit_id, const std::string& port) const;
    double output(std::size_t n, const std::string& unit_id, const std::string& port) const;
    double state(std::size_t n, const std::string& unit_id, const std::string& name) const;

    double input(std::size_t n, const PortRef& ref) const {
        return input(n, ref.unit_id, ref.port_name);
    }
    double output(std::size_t n, const PortRef& ref) const {
        return output(n, ref.unit_id, ref.port_name);
    }

private:
    static double lookup(const std::map<std::string, double>& map, const std::string& key,
                         const char* kind, std::size_t n);

    std::vector<TraceRow> rows_;
};

}  // namespace costep
