#pragma once

// Event-triggered sampling for the two mechanisms:
//
//  * CS_ETM  - monitors the local neighborhood tracking error
//              q_i = sum_j (xhat_j - x_i); fires when |q_i - q_i(t_k)| >= eta |q_i|
//              and applies u_i = K q_i(t_k).
//  * S_ETM   - monitors the agent's own state drift e_i = x_i(t_k) - x_i; fires
//              when e_i^2 >= eta (sum_j (x_i - xhat_j))^2 and applies
//              u_i = -K sum_j (x_i(t_k) - xhat_j). Scalar agents only.
//
// Neighbors learn x_j only when j fires (broadcast-buffer model): xhat_j is the
// state j broadcast at its most recent event.

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "etmas/dynamics.hpp"
#include "etmas/graph.hpp"

namespace etmas {

class TriggerError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mechanism { CS_ETM, S_ETM };

std::string_view to_string(Mechanism m);
Mechanism mechanism_from_string(std::string_view s);

struct TriggerConfig {
  Mechanism mechanism = Mechanism::CS_ETM;
  std::vector<double> eta;  // one per agent, each in (0, 1)

  static TriggerConfig uniform(Mechanism m, std::size_t n_agents, double eta);
  void validate(std::size_t n_agents) const;
};

struct AgentBuffer {
  std::vector<Eigen::VectorXd> broadcast;  // aligned with Graph::neighbors(i)
  Eigen::VectorXd held_q;
  Eigen::VectorXd held_x;
  double last_trigger_time = 0.0;
  bool sampled = false;
};

struct TriggerEvent {
  std::size_t agent = 0;  // 0-based
  double time = 0.0;
};

class NetworkBuffers {
 public:
  // Every agent starts with x0 broadcast to its neighbors and no held sample;
  // the first on_trigger call per agent fills held_q / held_x.
  NetworkBuffers(const Graph& g, const std::vector<Eigen::VectorXd>& x0);

  const Graph& graph() const { return *graph_; }
  const AgentBuffer& agent(std::size_t i) const { return agents_[i]; }
  const std::vector<TriggerEvent>& log() const { return log_; }

  // Last value neighbor j broadcast, as seen by i. j must be a neighbor of i.
  const Eigen::VectorXd& broadcast_of(std::size_t i, std::size_t j) const;

  // Samples q_now / x_i into agent i's hold and broadcasts x_i to every
  // neighbor of i.
  void on_trigger(std::size_t i, double t, const Eigen::VectorXd& x_i, const Eigen::VectorXd& q_now);

 private:
  const Graph* graph_;
  std::vector<AgentBuffer> agents_;
  // slot_[i][k]: position of i in the neighbor list of neighbors(i)[k]
  std::vector<std::vector<std::size_t>> slot_;
  std::vector<TriggerEvent> log_;
};

// q_i = sum_j (xhat_j - x_i); zero for an isolated agent.
Eigen::VectorXd local_tracking_error(std::size_t i, const Eigen::VectorXd& x_i, const NetworkBuffers& buffers);

Eigen::VectorXd cs_measurement_error(const Eigen::VectorXd& q_now, const AgentBuffer& buffer);
bool cs_trigger_check(const Eigen::VectorXd& e_bar, const Eigen::VectorXd& q_now, double eta);
Eigen::VectorXd cs_control(const GainMatrix& k, const AgentBuffer& buffer);

Eigen::VectorXd s_measurement_error(const Eigen::VectorXd& held_x, const Eigen::VectorXd& x_now);
// sum_j (x_i - xhat_j)
Eigen::VectorXd s_relative_sum(std::size_t i, const Eigen::VectorXd& x_i, const NetworkBuffers& buffers);
bool s_trigger_check(const Eigen::VectorXd& e, std::size_t i, const Eigen::VectorXd& x_i, const NetworkBuffers& buffers,
                     double eta);
// Scalar form of the predicate: e^2 >= eta * rel^2.
bool s_trigger_check(double e, double relative_sum, double eta);
Eigen::VectorXd s_control(const GainMatrix& k, std::size_t i, const NetworkBuffers& buffers);

}  // namespace etmas
