#pragma once

// Undirected, unweighted communication topology and the spectral /
// connectivity queries the simulator needs.
//
// Agent indices are 1-based at the API boundary (scenario files, CLI,
// reports) and 0-based internally. Functions taking `AgentSet` use
// 1-based indices.

#include <cstddef>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace etmas {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using AgentSet = std::set<std::size_t>;  // 1-based agent indices
using Edge = std::pair<std::size_t, std::size_t>;

class Graph {
 public:
  Graph() = default;

  std::size_t size() const { return n_; }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  // Edges as (i, j) with i < j, 1-based, sorted.
  const std::vector<Edge>& edges() const { return edges_; }
  // 0-based neighbor lists, ascending.
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_[i]; }
  std::size_t degree(std::size_t i) const { return neighbors_[i].size(); }
  bool adjacent(std::size_t i, std::size_t j) const { return adjacency_(i, j) != 0.0; }

 private:
  friend Graph build_graph(std::size_t, const std::vector<Edge>&);

  std::size_t n_ = 0;
  Eigen::MatrixXd adjacency_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

struct LaplacianSpectrum {
  std::vector<double> eigenvalues;  // ascending
  std::size_t multiplicity_of_zero = 0;

  // Eigenvalues counted as nonzero under the zero tolerance.
  std::vector<double> nonzero() const;
};

// Rejects self-loops and out-of-range indices; duplicate edges collapse.
Graph build_graph(std::size_t n_agents, const std::vector<Edge>& edges);

Eigen::MatrixXd laplacian(const Graph& g);

bool is_connected(const Graph& g);

// Connected components of g with `removed` deleted. Each component is a
// 1-based set; components are ordered by their smallest member.
std::vector<AgentSet> components_after_removal(const Graph& g, const AgentSet& removed);

// Requires g connected and `candidate` a proper nonempty subset.
bool is_vertex_cut(const Graph& g, const AgentSet& candidate);

// |lambda| < 1e-8 * max(1, lambda_max) counts as zero.
double zero_eigenvalue_tolerance(double lambda_max);

LaplacianSpectrum laplacian_eigenvalues(const Graph& g);

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values(k)
};

EigenPairs laplacian_eigenpairs(const Graph& g);

// Common fixture topologies (1-based node labels).
Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);

}  // namespace etmas
