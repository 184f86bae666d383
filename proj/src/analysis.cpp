#include "etmas/analysis.hpp"

#include <algorithm>
#include <string>

namespace etmas {

double disagreement(const std::vector<Eigen::VectorXd>& states) {
  double worst = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j) worst = std::max(worst, (states[i] - states[j]).norm());
  return worst;
}

double disagreement_at(const Trace& tr, std::size_t k) { return disagreement(tr.states_at(k)); }

double laplacian_energy(const Graph& g, const std::vector<Eigen::VectorXd>& states) {
  double energy = 0.0;
  for (const auto& [a, b] : g.edges()) energy += (states[a - 1] - states[b - 1]).squaredNorm();
  return energy;
}

double ConsensusReport::max_cluster_gap() const {
  double gap = 0.0;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    for (std::size_t j = i + 1; j < clusters.size(); ++j)
      gap = std::max(gap, (clusters[i].mean - clusters[j].mean).norm());
  return gap;
}

std::optional<double> settle_time(const Trace& tr, double tol) {
  std::optional<double> since;
  for (std::size_t k = 0; k < tr.rows(); ++k) {
    if (disagreement_at(tr, k) < tol) {
      if (!since) since = tr.times[k];
    } else {
      since.reset();
    }
  }
  return since;
}

ConsensusReport cluster_report(const Trace& tr, const std::vector<AgentSet>& partition, double tol) {
  std::vector<int> seen(tr.n_agents, 0);
  for (const auto& block : partition) {
    if (block.empty()) throw AnalysisError("partition contains an empty component");
    for (auto a : block) {
      if (a < 1 || a > tr.n_agents) throw AnalysisError("partition member " + std::to_string(a) + " out of range");
      if (seen[a - 1]++) throw AnalysisError("agent " + std::to_string(a) + " appears in two components");
    }
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) throw AnalysisError("partition does not cover every agent");

  const std::size_t last = tr.rows() - 1;
  const auto final_states = tr.states_at(last);

  ConsensusReport rep;
  rep.final_disagreement = disagreement(final_states);
  rep.settle_time = settle_time(tr, tol);
  rep.converged = true;
  for (const auto& block : partition) {
    ClusterValue cv;
    cv.members = block;
    std::vector<Eigen::VectorXd> members;
    for (auto a : block) members.push_back(final_states[a - 1]);
    cv.mean = Eigen::VectorXd::Zero(tr.state_dim);
    for (const auto& m : members) cv.mean += m;
    cv.mean /= static_cast<double>(members.size());
    cv.disagreement = disagreement(members);
    cv.converged = cv.disagreement < tol;
    rep.converged = rep.converged && cv.converged;
    rep.clusters.push_back(std::move(cv));
  }
  return rep;
}

AgentEventStats gap_stats(const std::vector<double>& event_times) {
  AgentEventStats st;
  st.count = event_times.size();
  if (st.count < 2) return st;
  st.gaps_defined = true;
  st.min_gap = event_times[1] - event_times[0];
  st.max_gap = st.min_gap;
  double sum = 0.0;
  for (std::size_t k = 1; k < event_times.size(); ++k) {
    const double g = event_times[k] - event_times[k - 1];
    st.min_gap = std::min(st.min_gap, g);
    st.max_gap = std::max(st.max_gap, g);
    sum += g;
  }
  st.mean_gap = sum / static_cast<double>(st.count - 1);
  return st;
}

EventStats inter_event_stats(const Trace& tr) {
  EventStats out;
  for (std::size_t i = 0; i < tr.n_agents; ++i) out.agents.push_back(gap_stats(tr.event_times(i)));
  return out;
}

std::size_t EventStats::events_after(const Trace& tr, std::size_t agent, double t) const {
  const auto& ev = tr.event_steps[agent];
  return static_cast<std::size_t>(
      std::count_if(ev.begin(), ev.end(), [&](std::size_t k) { return tr.times[k] > t + kOnsetSlack; }));
}

}  // namespace etmas
