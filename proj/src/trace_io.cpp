#include "qkt/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qkt/version.hpp"

namespace qkt {

std::string format_double(double v) {
  char buf[40];
  // try increasing precision until the value round-trips
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string trace_to_csv(const QfiTrace& trace) {
  const bool dissipative = !trace.trace_error.empty();
  std::ostringstream out;
  out << (dissipative ? "step,t,qfi,gamma,substeps,trace_error,min_eigenvalue\n"
                      : "step,t,qfi\n");
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    out << trace.steps[i] << ',' << format_double(trace.steps[i] * trace.period) << ','
        << format_double(trace.qfi[i]);
    if (dissipative) {
      out << ',' << format_double(trace.params.gamma) << ',' << trace.params.substeps << ','
          << format_double(trace.trace_error[i]) << ','
          << format_double(trace.min_eigenvalue[i]);
    }
    out << '\n';
  }
  return out.str();
}

QfiTrace trace_from_csv(const std::string& csv) {
  QfiTrace trace;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace_from_csv: empty input");
  const bool dissipative = line.find("gamma") != std::string::npos;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw std::invalid_argument("trace_from_csv: malformed row: " + line);
    trace.steps.push_back(std::stol(cells[0]));
    trace.qfi.push_back(std::stod(cells[2]));
    if (trace.steps.size() == 1 && trace.steps[0] != 0) {
      trace.period = std::stod(cells[1]) / trace.steps[0];
    }
    if (dissipative) {
      if (cells.size() < 7) throw std::invalid_argument("trace_from_csv: malformed row: " + line);
      trace.params.gamma = std::stod(cells[3]);
      trace.params.substeps = std::stoi(cells[4]);
      trace.trace_error.push_back(std::stod(cells[5]));
      trace.min_eigenvalue.push_back(std::stod(cells[6]));
    }
  }
  return trace;
}

std::string grid_to_csv(const HusimiGrid& grid) {
  std::ostringstream out;
  out << "theta,phi,value\n";
  for (int a = 0; a < grid.n_theta; ++a) {
    for (int b = 0; b < grid.n_phi; ++b) {
      out << format_double(grid.thetas(a)) << ',' << format_double(grid.phis(b)) << ','
          << format_double(grid.values(a, b)) << '\n';
    }
  }
  return out.str();
}

std::string trace_metadata_json(const QfiTrace& trace) {
  nlohmann::json meta;
  meta["N"] = trace.params.n_spins;
  meta["alpha"] = trace.params.alpha;
  meta["beta"] = trace.params.beta;
  meta["delta"] = trace.params.delta;
  meta["gamma"] = trace.params.gamma;
  meta["theta0"] = trace.params.theta0;
  meta["phi0"] = trace.params.phi0;
  meta["method"] = trace.params.method;
  meta["substeps"] = trace.params.substeps;
  meta["period"] = trace.period;
  meta["tolerances"] = {{"recurrence", 1e-8},
                        {"norm_drift_per_1e4_steps", 1e-10},
                        {"trace_renormalization", 1e-10},
                        {"positivity_abort", -1e-6}};
  meta["tool_version"] = kToolVersion;
  return meta.dump(2) + "\n";
}

void trace_params_from_json(const std::string& json_text, QfiTrace& trace) {
  const auto meta = nlohmann::json::parse(json_text);
  trace.params.n_spins = meta.at("N").get<int>();
  trace.params.alpha = meta.at("alpha").get<double>();
  trace.params.beta = meta.at("beta").get<double>();
  trace.params.delta = meta.value("delta", 0.0);
  trace.params.gamma = meta.value("gamma", 0.0);
  trace.params.theta0 = meta.value("theta0", 0.0);
  trace.params.phi0 = meta.value("phi0", 0.0);
  trace.params.method = meta.at("method").get<std::string>();
  trace.params.substeps = meta.value("substeps", 0);
  trace.period = meta.value("period", 1.0);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace qkt
