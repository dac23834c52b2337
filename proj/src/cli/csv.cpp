#include "costep/cli/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

namespace costep {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& text, double& out) {
    const std::string trimmed = trim(text);
    if (trimmed.empty()) return false;
    char* end = nullptr;
    out = std::strtod(trimmed.c_str(), &end);
    return end == trimmed.c_str() + trimmed.size();
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out << ',';
        out << cells[i];
    }
    out << '\n';
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    if (trace.empty()) throw ArgumentError("cannot serialize an empty trace");
    std::vector<std::string> header{"n", "t", "dt"};
    const TraceRow& first = trace.row(0);
    for (const auto& [key, value] : first.inputs) header.push_back(key);
    for (const auto& [key, value] : first.outputs) header.push_back(key);
    for (const auto& [key, value] : first.states) header.push_back(key);
    write_csv_row(out, header);

    std::vector<std::string> cells;
    for (std::size_t n = 0; n < trace.row_count(); ++n) {
        const TraceRow& row = trace.row(n);
        cells.clear();
        cells.push_back(std::to_string(row.index));
        cells.push_back(format_double(row.t));
        cells.push_back(format_double(row.dt));
        for (const auto& [key, value] : row.inputs) cells.push_back(format_double(value));
        for (const auto& [key, value] : row.outputs) cells.push_back(format_double(value));
        for (const auto& [key, value] : row.states) cells.push_back(format_double(value));
        write_csv_row(out, cells);
    }
}

void write_discrepancy_csv(std::ostream& out, const DiscrepancySeries& series) {
    if (series.points.empty()) throw ArgumentError("cannot serialize an empty series");
    const bool with_exact = series.points.front().predicted_exact.has_value();
    std::vector<std::string> header{"t", "measured", "predicted_leading"};
    if (with_exact) header.push_back("predicted_exact");
    write_csv_row(out, header);

    std::vector<std::string> cells;
    for (const DiscrepancyPoint& point : series.points) {
        cells.clear();
        cells.push_back(format_double(point.t));
        cells.push_back(format_double(point.measured));
        cells.push_back(format_double(point.predicted_leading));
        if (with_exact) cells.push_back(format_double(point.predicted_exact.value_or(0.0)));
        write_csv_row(out, cells);
    }
}

std::vector<FlowSample> read_flow_csv(std::istream& in, const std::string& name) {
    std::vector<FlowSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string content = trim(line);
        if (content.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(content);
        if (cells.size() < 2) {
            throw ConfigError(name + ":" + std::to_string(line_no) +
                              ": expected at least two columns (t, q)");
        }
        double t = 0.0;
        double q = 0.0;
        if (!parse_double(cells[0], t) || !parse_double(cells[1], q)) {
            if (line_no == 1 && samples.empty()) continue;  // header row
            throw ConfigError(name + ":" + std::to_string(line_no) +
                              ": could not parse numeric (t, q) values");
        }
        samples.push_back(FlowSample{t, q});
    }
    if (samples.size() < 2) {
        throw ConfigError(name + ": flow CSV needs at least two (t, q) samples");
    }
    return samples;
}

}  // namespace costep
