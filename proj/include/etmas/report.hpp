#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "etmas/analysis.hpp"
#include "etmas/engine.hpp"

namespace etmas {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

void write_states_csv(const Trace& tr, const std::filesystem::path& path);
void write_events_csv(const Trace& tr, const std::filesystem::path& path);
void write_controls_csv(const Trace& tr, const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<double> times;
  Eigen::MatrixXd values;  // one row per time
};

CsvTable read_series_csv(const std::filesystem::path& path);

// Components of the graph once armed replay targets are removed, with each
// removed agent as its own block. Without armed replays: one block.
std::vector<AgentSet> reporting_partition(const Scenario& s, const Trace& tr);

std::string render_summary(const Scenario& s, const Trace& tr);

// State trajectories and the per-agent trigger-monitor error (|e_bar| for
// CS_ETM, e^2 for S_ETM) as standalone SVG documents.
std::string render_state_svg(const Trace& tr, const std::string& title);
std::string render_error_svg(const Trace& tr, const std::string& title);

struct RunOptions {
  std::filesystem::path out_dir;
  bool plots = false;
};

struct RunResult {
  Trace trace;
  std::vector<std::filesystem::path> files;
};

// Writes states.csv, events.csv, controls.csv, summary.txt and, with plots
// enabled, states.svg and errors.svg into opts.out_dir. Returns the paths.
std::vector<std::filesystem::path> write_outputs(const Scenario& s, const Trace& tr, const RunOptions& opts);

// Simulates and writes states.csv, events.csv, controls.csv, summary.txt and,
// with plots enabled, states.svg and errors.svg. Throws IoError when the
// directory cannot be created or a file cannot be written.
RunResult run_scenario(const Scenario& s, const RunOptions& opts);

}  // namespace etmas
