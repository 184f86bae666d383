#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "etmas/attack.hpp"
#include "etmas/dynamics.hpp"
#include "etmas/graph.hpp"
#include "etmas/triggering.hpp"

namespace etmas {

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kDefaultDt = 1e-3;
inline constexpr double kDivergenceBound = 1e12;
inline constexpr std::size_t kZenoWindow = 100;

struct Scenario {
  std::string name;
  Graph graph;
  LinearDynamics dynamics = LinearDynamics::single_integrator();
  GainMatrix gain = GainMatrix::scalar(1.0);
  TriggerConfig trigger;
  std::vector<AttackSpec> attacks;
  std::vector<Eigen::VectorXd> x0;  // one state vector per agent
  double horizon = 10.0;
  double dt = kDefaultDt;
  std::uint64_t seed = 0;
  // Skip the connectivity / Hurwitz preconditions (adversarial studies).
  bool allow_unverified_gain = false;

  std::size_t n_agents() const { return graph.size(); }
  std::size_t steps() const;  // number of dt steps covering the horizon
  void validate() const;      // throws ScenarioError with a field-located message
};

enum AgentFlag : unsigned {
  kNominal = 0,
  kNonTriggering = 1u << 0,
  kContinuousTriggering = 1u << 1,
  kDiverged = 1u << 2,
};

std::string flag_names(unsigned flags);

struct AttackLogEntry {
  AttackSpec spec;
  std::optional<ReplayState> replay;  // set once a replay is armed
  std::string note;                   // e.g. why a replay refused to arm
};

struct Trace {
  std::size_t n_agents = 0;
  Eigen::Index state_dim = 1;
  Eigen::Index input_dim = 1;
  Mechanism mechanism = Mechanism::CS_ETM;
  double dt = kDefaultDt;
  double horizon = 0.0;

  std::vector<double> times;            // k * dt
  Eigen::MatrixXd states;               // row k: agent-major concatenation of x_i(t_k)
  Eigen::MatrixXd controls;             // row k: applied u_i^c on [t_k, t_k+1)
  // Trigger monitor evaluated at t_k before any event at t_k:
  //   CS_ETM: |e_bar_i| and eta_i |q_i^c|;  S_ETM: e_i^2 and eta_i (sum_j (x_i - xhat_j))^2
  Eigen::MatrixXd monitor_error;
  Eigen::MatrixXd monitor_threshold;
  std::vector<std::vector<std::size_t>> event_steps;  // per agent, ascending grid indices
  std::vector<AttackLogEntry> attack_log;
  std::vector<unsigned> flags;

  bool diverged = false;
  std::vector<std::size_t> diverged_agents;  // 0-based

  std::size_t rows() const { return times.size(); }
  Eigen::VectorXd state(std::size_t k, std::size_t agent) const;
  std::vector<Eigen::VectorXd> states_at(std::size_t k) const;
  std::vector<double> event_times(std::size_t agent) const;
  std::size_t step_at(double t) const;  // first grid index with t_k >= t (clamped)
};

// Runs one scenario on the fixed grid. Per step: arm due replays, evaluate
// every agent's predicate on attack-filtered measurements, sample and
// broadcast for the agents that fired, compute held controls, add actuator
// attacks, then integrate with zero-order hold. Every agent fires at t = 0;
// agents without neighbors never fire again.
// A state beyond kDivergenceBound truncates the trace and sets `diverged`.
Trace simulate(const Scenario& s);

// No events of agent i (0-based) in (from_t, horizon].
bool detect_non_triggering(const Trace& tr, std::size_t i, double from_t);

// A run of at least `window` consecutive grid steps each carrying an event of
// agent i, considering only steps with t_k >= from_t.
bool detect_continuous_triggering(const Trace& tr, std::size_t i, std::size_t window, double from_t = 0.0);

// Longest run of consecutive triggering steps at or after from_t.
std::size_t longest_trigger_run(const Trace& tr, std::size_t i, double from_t = 0.0);

// Both detectors run from the earliest attack onset when attacks exist, so
// start-up transients are not attributed to an attack. Without attacks only
// continuous triggering is checked, over the whole trace.
std::vector<unsigned> classify_agents(const Trace& tr, const std::vector<AttackSpec>& specs,
                                      std::size_t window = kZenoWindow);

}  // namespace etmas
