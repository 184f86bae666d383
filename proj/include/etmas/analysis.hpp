#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "etmas/engine.hpp"
#include "etmas/graph.hpp"

namespace etmas {

class AnalysisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kConsensusTolerance = 1e-2;

// max_{i,j} |x_i - x_j|; 0 for fewer than two agents.
double disagreement(const std::vector<Eigen::VectorXd>& states);
double disagreement_at(const Trace& tr, std::size_t k);

// x' (L (x) I_n) x, the Laplacian energy of a stacked state.
double laplacian_energy(const Graph& g, const std::vector<Eigen::VectorXd>& states);

struct ClusterValue {
  AgentSet members;
  Eigen::VectorXd mean;  // mean final state
  double disagreement = 0.0;
  bool converged = false;
};

struct ConsensusReport {
  double final_disagreement = 0.0;
  std::vector<ClusterValue> clusters;
  bool converged = false;               // every cluster converged
  std::optional<double> settle_time;    // global disagreement stays < tol from here on
  // Largest distance between cluster means (0 with a single cluster).
  double max_cluster_gap() const;
};

// Partition must cover 1..n disjointly with nonempty blocks.
ConsensusReport cluster_report(const Trace& tr, const std::vector<AgentSet>& partition,
                               double tol = kConsensusTolerance);

std::optional<double> settle_time(const Trace& tr, double tol = kConsensusTolerance);

struct AgentEventStats {
  std::size_t count = 0;
  bool gaps_defined = false;  // needs at least two events
  double min_gap = 0.0;
  double mean_gap = 0.0;
  double max_gap = 0.0;
};

struct EventStats {
  std::vector<AgentEventStats> agents;
  std::size_t events_after(const Trace& tr, std::size_t agent, double t) const;
};

AgentEventStats gap_stats(const std::vector<double>& event_times);
EventStats inter_event_stats(const Trace& tr);

}  // namespace etmas
