#pragma once

// YAML scenario files.
//
//   name: sec5b_actuator
//   description: free text
//   graph:          { agents: 4, edges: [[1, 2], [2, 3], [3, 4]] }
//   dynamics:       { A: [[0]], B: [[1]] }          # row-major
//   gain:           { K: [[3]] }
//   trigger:        { mechanism: S_ETM, eta: 0.01 } # eta: scalar or per-agent list
//   initial_states: [5, 1, 0, -2]                    # or one list per agent
//   attacks:
//     - { channel: ACTUATOR_CONSTANT, agent: 2, onset: 6, value: -1 }
//     - { channel: SENSOR_REPLAY, agent: 4, onset: 5.1 }          # optional theta
//     - { channel: ACTUATOR_SIGNAL, agent: 1, onset: 0, signal: [[0, 1], [2, 0]] }
//   sim:            { horizon: 10, dt: 0.001, seed: 1, allow_unverified_gain: false }
//   outputs:        { directory: out, plots: true }

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "etmas/engine.hpp"

namespace etmas {

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable inputs or unwritable outputs.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputOptions {
  std::optional<std::string> directory;
  bool plots = false;
};

struct ScenarioDocument {
  std::string description;
  Scenario scenario;
  OutputOptions outputs;
};

// `origin` names the source in diagnostics ("<file>:<line>: <field>: <problem>").
ScenarioDocument parse_scenario_text(const std::string& text, const std::string& origin = "<scenario>");
ScenarioDocument parse_scenario(const std::filesystem::path& path);

}  // namespace etmas
