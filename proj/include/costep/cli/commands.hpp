#pragma once

// Command implementations behind the costep CLI. Exit codes: 0 on success,
// 2 for configuration/usage problems, 1 for runtime failures.

#include <iosfwd>
#include <string>

namespace costep {

/// Runs a builtin experiment or a config file; writes trace.csv,
/// discrepancy.csv, and summary.txt into out_dir.
int cmd_run(const std::string& name_or_path, const std::string& out_dir, std::ostream& err);

/// Reads (t, q) samples and writes predicted.csv with the leading-order and
/// regrouped discrepancy series.
int cmd_predict(const std::string& flow_csv_path, const std::string& out_dir,
                std::ostream& err);

/// Prints the builtin experiment names with one-line descriptions.
int cmd_list(std::ostream& out);

/// Output directory resolution: explicit --out beats COSTEP_OUT beats
/// "costep_out".
std::string default_output_dir();

}  // namespace costep
