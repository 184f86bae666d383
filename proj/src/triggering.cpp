#include "etmas/triggering.hpp"

#include <algorithm>
#include <string>

namespace etmas {

std::string_view to_string(Mechanism m) { return m == Mechanism::CS_ETM ? "CS_ETM" : "S_ETM"; }

Mechanism mechanism_from_string(std::string_view s) {
  if (s == "CS_ETM") return Mechanism::CS_ETM;
  if (s == "S_ETM") return Mechanism::S_ETM;
  throw TriggerError("unknown mechanism '" + std::string(s) + "' (expected CS_ETM or S_ETM)");
}

TriggerConfig TriggerConfig::uniform(Mechanism m, std::size_t n_agents, double eta) {
  return {m, std::vector<double>(n_agents, eta)};
}

void TriggerConfig::validate(std::size_t n_agents) const {
  if (eta.size() != n_agents)
    throw TriggerError("eta needs " + std::to_string(n_agents) + " entries, got " + std::to_string(eta.size()));
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (!(eta[i] > 0.0 && eta[i] < 1.0))
      throw TriggerError("eta of agent " + std::to_string(i + 1) + " must lie in (0,1)");
  }
}

NetworkBuffers::NetworkBuffers(const Graph& g, const std::vector<Eigen::VectorXd>& x0)
    : graph_(&g), agents_(g.size()), slot_(g.size()) {
  if (x0.size() != g.size()) throw TriggerError("initial state count does not match agent count");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& nb = g.neighbors(i);
    for (auto j : nb) agents_[i].broadcast.push_back(x0[j]);
    for (auto j : nb) {
      const auto& back = g.neighbors(j);
      slot_[i].push_back(static_cast<std::size_t>(std::lower_bound(back.begin(), back.end(), i) - back.begin()));
    }
  }
}

const Eigen::VectorXd& NetworkBuffers::broadcast_of(std::size_t i, std::size_t j) const {
  const auto& nb = graph_->neighbors(i);
  const auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) throw TriggerError("agent " + std::to_string(j + 1) + " is not a neighbor");
  return agents_[i].broadcast[static_cast<std::size_t>(it - nb.begin())];
}

void NetworkBuffers::on_trigger(std::size_t i, double t, const Eigen::VectorXd& x_i, const Eigen::VectorXd& q_now) {
  auto& me = agents_[i];
  me.held_q = q_now;
  me.held_x = x_i;
  me.last_trigger_time = t;
  me.sampled = true;
  const auto& nb = graph_->neighbors(i);
  for (std::size_t k = 0; k < nb.size(); ++k) agents_[nb[k]].broadcast[slot_[i][k]] = x_i;
  log_.push_back({i, t});
}

Eigen::VectorXd local_tracking_error(std::size_t i, const Eigen::VectorXd& x_i, const NetworkBuffers& buffers) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(x_i.size());
  for (const auto& xj : buffers.agent(i).broadcast) q += xj - x_i;
  return q;
}

Eigen::VectorXd cs_measurement_error(const Eigen::VectorXd& q_now, const AgentBuffer& buffer) {
  return q_now - buffer.held_q;
}

bool cs_trigger_check(const Eigen::VectorXd& e_bar, const Eigen::VectorXd& q_now, double eta) {
  return e_bar.norm() >= eta * q_now.norm();
}

Eigen::VectorXd cs_control(const GainMatrix& k, const AgentBuffer& buffer) { return k.K() * buffer.held_q; }

Eigen::VectorXd s_measurement_error(const Eigen::VectorXd& held_x, const Eigen::VectorXd& x_now) {
  return held_x - x_now;
}

Eigen::VectorXd s_relative_sum(std::size_t i, const Eigen::VectorXd& x_i, const NetworkBuffers& buffers) {
  return -local_tracking_error(i, x_i, buffers);
}

bool s_trigger_check(double e, double relative_sum, double eta) {
  return e * e >= eta * relative_sum * relative_sum;
}

bool s_trigger_check(const Eigen::VectorXd& e, std::size_t i, const Eigen::VectorXd& x_i, const NetworkBuffers& buffers,
                     double eta) {
  if (e.size() != 1 || x_i.size() != 1)
    throw TriggerError("S_ETM is defined for scalar agents only (state dimension 1)");
  return s_trigger_check(e(0), s_relative_sum(i, x_i, buffers)(0), eta);
}

Eigen::VectorXd s_control(const GainMatrix& k, std::size_t i, const NetworkBuffers& buffers) {
  const auto& me = buffers.agent(i);
  Eigen::VectorXd rel = Eigen::VectorXd::Zero(me.held_x.size());
  for (const auto& xj : me.broadcast) rel += me.held_x - xj;
  return -(k.K() * rel);
}

}  // namespace etmas
