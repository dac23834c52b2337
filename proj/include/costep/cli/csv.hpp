#pragma once

// CSV helpers: comma-separated, one header row, LF line endings. Numbers are
// serialized with 17 significant digits so doubles round-trip exactly.

#include <iosfwd>
#include <string>
#include <vector>

#include "costep/analysis/analysis.hpp"
#include "costep/core/trace.hpp"

namespace costep {

/// Shortest-round-trip-safe formatting (%.17g).
std::string format_double(double value);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

void write_trace_csv(std::ostream& out, const Trace& trace);
void write_discrepancy_csv(std::ostream& out, const DiscrepancySeries& series);

/// Reads (t, q) samples. A non-numeric first line is treated as a header.
/// Malformed content raises ConfigError with a "name:line:" anchor.
std::vector<FlowSample> read_flow_csv(std::istream& in, const std::string& name);

}  // namespace costep
