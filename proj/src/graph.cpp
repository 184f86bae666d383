#include "etmas/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include <Eigen/Eigenvalues>

namespace etmas {

std::vector<double> LaplacianSpectrum::nonzero() const {
  if (eigenvalues.empty()) return {};
  return {eigenvalues.begin() + static_cast<std::ptrdiff_t>(multiplicity_of_zero), eigenvalues.end()};
}

Graph build_graph(std::size_t n_agents, const std::vector<Edge>& edges) {
  if (n_agents == 0) throw GraphError("graph must contain at least one agent");

  std::set<Edge> unique;
  for (const auto& [a, b] : edges) {
    if (a < 1 || a > n_agents || b < 1 || b > n_agents) {
      throw GraphError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                       ") references an agent outside 1.." + std::to_string(n_agents));
    }
    if (a == b) throw GraphError("self-loop on agent " + std::to_string(a) + " is not allowed");
    unique.emplace(std::min(a, b), std::max(a, b));
  }

  Graph g;
  g.n_ = n_agents;
  g.adjacency_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_agents), static_cast<Eigen::Index>(n_agents));
  g.neighbors_.assign(n_agents, {});
  g.edges_.assign(unique.begin(), unique.end());
  for (const auto& [a, b] : g.edges_) {
    const auto i = a - 1;
    const auto j = b - 1;
    g.adjacency_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    g.adjacency_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    g.neighbors_[i].push_back(j);
    g.neighbors_[j].push_back(i);
  }
  for (auto& nb : g.neighbors_) std::sort(nb.begin(), nb.end());
  return g;
}

Eigen::MatrixXd laplacian(const Graph& g) {
  const Eigen::VectorXd degrees = g.adjacency().rowwise().sum();
  Eigen::MatrixXd lap = -g.adjacency();
  lap.diagonal() = degrees;
  return lap;
}

namespace {

// BFS labelling over nodes not in `blocked` (0-based mask). Returns the
// component id per node, -1 for blocked nodes.
std::vector<int> label_components(const Graph& g, const std::vector<bool>& blocked, int& count) {
  const std::size_t n = g.size();
  std::vector<int> label(n, -1);
  count = 0;
  std::queue<std::size_t> frontier;
  for (std::size_t s = 0; s < n; ++s) {
    if (blocked[s] || label[s] >= 0) continue;
    label[s] = count;
    frontier.push(s);
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop();
      for (auto v : g.neighbors(u)) {
        if (!blocked[v] && label[v] < 0) {
          label[v] = count;
          frontier.push(v);
        }
      }
    }
    ++count;
  }
  return label;
}

}  // namespace

bool is_connected(const Graph& g) {
  int count = 0;
  label_components(g, std::vector<bool>(g.size(), false), count);
  return count <= 1;
}

std::vector<AgentSet> components_after_removal(const Graph& g, const AgentSet& removed) {
  std::vector<bool> blocked(g.size(), false);
  for (auto a : removed) {
    if (a < 1 || a > g.size()) throw GraphError("removed agent " + std::to_string(a) + " is out of range");
    blocked[a - 1] = true;
  }
  if (removed.size() == g.size()) throw GraphError("cannot remove every agent from the graph");

  int count = 0;
  const auto label = label_components(g, blocked, count);
  std::vector<AgentSet> out(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (label[i] >= 0) out[static_cast<std::size_t>(label[i])].insert(i + 1);
  }
  return out;
}

bool is_vertex_cut(const Graph& g, const AgentSet& candidate) {
  if (candidate.empty()) throw GraphError("vertex-cut candidate must be nonempty");
  if (!is_connected(g)) throw GraphError("vertex-cut query requires a connected graph");
  return components_after_removal(g, candidate).size() >= 2;
}

double zero_eigenvalue_tolerance(double lambda_max) { return 1e-8 * std::max(1.0, lambda_max); }

EigenPairs laplacian_eigenpairs(const Graph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(g));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

LaplacianSpectrum laplacian_eigenvalues(const Graph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(g), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();

  LaplacianSpectrum spec;
  spec.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());
  const double tol = zero_eigenvalue_tolerance(spec.eigenvalues.back());
  spec.multiplicity_of_zero = static_cast<std::size_t>(
      std::count_if(spec.eigenvalues.begin(), spec.eigenvalues.end(), [tol](double l) { return std::abs(l) < tol; }));
  return spec;
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  return build_graph(n, edges);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) edges.emplace_back(i, j);
  return build_graph(n, edges);
}

}  // namespace etmas
