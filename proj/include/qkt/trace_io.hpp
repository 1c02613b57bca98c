#pragma once

#include <filesystem>
#include <string>

#include "qkt/phase_space.hpp"
#include "qkt/pure_evolution.hpp"

namespace qkt {

// shortest round-trippable decimal form; all CSV output goes through this so
// identical runs produce byte-identical files
std::string format_double(double v);

// pure traces: step,t,qfi
// dissipative traces: step,t,qfi,gamma,substeps,trace_error,min_eigenvalue
std::string trace_to_csv(const QfiTrace& trace);
QfiTrace trace_from_csv(const std::string& csv);

// theta,phi,value rows in row-major grid order
std::string grid_to_csv(const HusimiGrid& grid);

// JSON sidecar body for a trace (N, alpha, beta, delta, gamma, method,
// initial state, substeps, tolerances, tool version)
std::string trace_metadata_json(const QfiTrace& trace);
void trace_params_from_json(const std::string& json_text, QfiTrace& trace);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace qkt
