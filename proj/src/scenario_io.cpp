#include "etmas/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace etmas {

namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& what) const {
    std::string where = origin_;
    if (at.IsDefined() && at.Mark().line >= 0) where += ":" + std::to_string(at.Mark().line + 1);
    throw ScenarioParseError(where + ": " + field + ": " + what);
  }

  YAML::Node require(const YAML::Node& parent, const char* key, const std::string& field) const {
    const YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) fail(parent, field, "required field is missing");
    return n;
  }

  double real(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, field, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  long long integer(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected an integer");
    try {
      return n.as<long long>();
    } catch (const YAML::Exception&) {
      fail(n, field, "expected an integer, got '" + n.Scalar() + "'");
    }
  }

  bool boolean(const YAML::Node& n, const std::string& field) const {
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fail(n, field, "expected true or false");
    }
  }

  std::string text(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected a string");
    return n.Scalar();
  }

  // Scalar or flat list.
  Eigen::VectorXd vector(const YAML::Node& n, const std::string& field) const {
    if (n.IsScalar()) return Eigen::VectorXd::Constant(1, real(n, field));
    if (!n.IsSequence() || n.size() == 0) fail(n, field, "expected a number or a nonempty list of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(n.size()));
    for (std::size_t k = 0; k < n.size(); ++k) v(static_cast<Eigen::Index>(k)) = real(n[k], field);
    return v;
  }

  // Row-major list of rows; a bare number is a 1x1 matrix.
  Eigen::MatrixXd matrix(const YAML::Node& n, const std::string& field) const {
    if (n.IsScalar()) return Eigen::MatrixXd::Constant(1, 1, real(n, field));
    if (!n.IsSequence() || n.size() == 0) fail(n, field, "expected a row-major list of rows");
    const std::size_t rows = n.size();
    const std::size_t cols = n[0].IsSequence() ? n[0].size() : 0;
    if (cols == 0) fail(n, field, "each row must be a nonempty list");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      if (!n[r].IsSequence() || n[r].size() != cols) fail(n[r], field, "rows must all have " + std::to_string(cols) + " entries");
      for (std::size_t c = 0; c < cols; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = real(n[r][c], field);
    }
    return m;
  }

  Signal signal(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, field, "expected a list of [time, value] samples");
    Signal s;
    for (std::size_t k = 0; k < n.size(); ++k) {
      const auto& sample = n[k];
      if (!sample.IsSequence() || sample.size() != 2) fail(sample, field, "each sample is [time, value]");
      s.times.push_back(real(sample[0], field));
      s.values.push_back(vector(sample[1], field));
    }
    return s;
  }

 private:
  std::string origin_;
};

Graph read_graph(const Reader& rd, const YAML::Node& root) {
  const auto g = rd.require(root, "graph", "graph");
  const auto agents_node = rd.require(g, "agents", "graph.agents");
  const long long agents = rd.integer(agents_node, "graph.agents");
  if (agents < 1) rd.fail(agents_node, "graph.agents", "must be positive");

  const auto edges_node = rd.require(g, "edges", "graph.edges");
  if (!edges_node.IsSequence()) rd.fail(edges_node, "graph.edges", "expected a list of [i, j] pairs");
  std::vector<Edge> edges;
  for (const auto& e : edges_node) {
    if (!e.IsSequence() || e.size() != 2) rd.fail(e, "graph.edges", "each edge is an [i, j] pair");
    const long long a = rd.integer(e[0], "graph.edges");
    const long long b = rd.integer(e[1], "graph.edges");
    if (a < 1 || b < 1 || a > agents || b > agents)
      rd.fail(e, "graph.edges", "agent index outside 1.." + std::to_string(agents));
    if (a == b) rd.fail(e, "graph.edges", "self-loop on agent " + std::to_string(a) + " is not allowed");
    edges.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  }
  return build_graph(static_cast<std::size_t>(agents), edges);
}

TriggerConfig read_trigger(const Reader& rd, const YAML::Node& root, std::size_t n) {
  const auto tn = rd.require(root, "trigger", "trigger");
  const auto mech_node = rd.require(tn, "mechanism", "trigger.mechanism");
  TriggerConfig cfg;
  try {
    cfg.mechanism = mechanism_from_string(rd.text(mech_node, "trigger.mechanism"));
  } catch (const TriggerError& e) {
    rd.fail(mech_node, "trigger.mechanism", e.what());
  }

  const auto eta_node = rd.require(tn, "eta", "trigger.eta");
  const Eigen::VectorXd eta = rd.vector(eta_node, "trigger.eta");
  if (eta_node.IsScalar()) {
    cfg.eta.assign(n, eta(0));
  } else {
    if (static_cast<std::size_t>(eta.size()) != n)
      rd.fail(eta_node, "trigger.eta", "expected one value per agent (" + std::to_string(n) + ")");
    cfg.eta.assign(eta.data(), eta.data() + eta.size());
  }
  for (double v : cfg.eta)
    if (!(v > 0.0 && v < 1.0)) rd.fail(eta_node, "trigger.eta", "must lie in (0,1)");
  return cfg;
}

std::vector<Eigen::VectorXd> read_initial_states(const Reader& rd, const YAML::Node& root, std::size_t n,
                                                 Eigen::Index dim) {
  const auto node = rd.require(root, "initial_states", "initial_states");
  if (!node.IsSequence() || node.size() != n)
    rd.fail(node, "initial_states", "expected one entry per agent (" + std::to_string(n) + ")");
  std::vector<Eigen::VectorXd> x0;
  for (const auto& xi : node) {
    x0.push_back(rd.vector(xi, "initial_states"));
    if (x0.back().size() != dim)
      rd.fail(xi, "initial_states", "each agent needs " + std::to_string(dim) + " values");
  }
  return x0;
}

AttackSpec read_attack(const Reader& rd, const YAML::Node& a, std::size_t k) {
  const std::string f = "attacks[" + std::to_string(k) + "]";
  AttackSpec spec;
  const auto ch = rd.require(a, "channel", f + ".channel");
  try {
    spec.channel = channel_from_string(rd.text(ch, f + ".channel"));
  } catch (const AttackError& e) {
    rd.fail(ch, f + ".channel", e.what());
  }
  const auto agent = rd.require(a, "agent", f + ".agent");
  const long long idx = rd.integer(agent, f + ".agent");
  if (idx < 1) rd.fail(agent, f + ".agent", "must be a 1-based agent index");
  spec.agent = static_cast<std::size_t>(idx);

  const auto onset = rd.require(a, "onset", f + ".onset");
  spec.onset = rd.real(onset, f + ".onset");
  if (!(spec.onset >= 0.0)) rd.fail(onset, f + ".onset", "must be >= 0");

  switch (spec.channel) {
    case AttackChannel::SENSOR_REPLAY:
      if (a["theta"].IsDefined() && !a["theta"].IsNull()) spec.theta = rd.real(a["theta"], f + ".theta");
      break;
    case AttackChannel::ACTUATOR_CONSTANT:
      spec.value = rd.vector(rd.require(a, "value", f + ".value"), f + ".value");
      break;
    case AttackChannel::SENSOR_ADDITIVE:
    case AttackChannel::ACTUATOR_SIGNAL:
      spec.signal = rd.signal(rd.require(a, "signal", f + ".signal"), f + ".signal");
      break;
  }
  return spec;
}

}  // namespace

ScenarioDocument parse_scenario_text(const std::string& text, const std::string& origin) {
  Reader rd(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ScenarioParseError(origin + ":" + std::to_string(e.mark.line + 1) + ": syntax: " + e.msg);
  }
  if (!root.IsMap()) throw ScenarioParseError(origin + ": document must be a mapping of sections");

  ScenarioDocument doc;
  Scenario& s = doc.scenario;
  if (root["name"].IsDefined()) s.name = rd.text(root["name"], "name");
  if (root["description"].IsDefined()) doc.description = rd.text(root["description"], "description");

  try {
    s.graph = read_graph(rd, root);
  } catch (const GraphError& e) {
    rd.fail(root["graph"], "graph.edges", e.what());
  }
  const std::size_t n = s.graph.size();

  if (const auto dyn = root["dynamics"]; dyn.IsDefined()) {
    const auto a = rd.matrix(rd.require(dyn, "A", "dynamics.A"), "dynamics.A");
    const auto b = rd.matrix(rd.require(dyn, "B", "dynamics.B"), "dynamics.B");
    try {
      s.dynamics = LinearDynamics(a, b);
    } catch (const DynamicsError& e) {
      rd.fail(dyn, "dynamics", e.what());
    }
  }
  if (const auto gain = root["gain"]; gain.IsDefined())
    s.gain = GainMatrix(rd.matrix(rd.require(gain, "K", "gain.K"), "gain.K"));

  s.trigger = read_trigger(rd, root, n);
  s.x0 = read_initial_states(rd, root, n, s.dynamics.state_dim());

  if (const auto attacks = root["attacks"]; attacks.IsDefined() && !attacks.IsNull()) {
    if (!attacks.IsSequence()) rd.fail(attacks, "attacks", "expected a list");
    for (std::size_t k = 0; k < attacks.size(); ++k) s.attacks.push_back(read_attack(rd, attacks[k], k));
  }

  if (const auto sim = root["sim"]; sim.IsDefined()) {
    if (sim["horizon"].IsDefined()) s.horizon = rd.real(sim["horizon"], "sim.horizon");
    if (sim["dt"].IsDefined()) s.dt = rd.real(sim["dt"], "sim.dt");
    if (sim["seed"].IsDefined()) {
      const long long seed = rd.integer(sim["seed"], "sim.seed");
      if (seed < 0) rd.fail(sim["seed"], "sim.seed", "must be nonnegative");
      s.seed = static_cast<std::uint64_t>(seed);
    }
    if (sim["allow_unverified_gain"].IsDefined())
      s.allow_unverified_gain = rd.boolean(sim["allow_unverified_gain"], "sim.allow_unverified_gain");
  }

  if (const auto out = root["outputs"]; out.IsDefined()) {
    if (out["directory"].IsDefined()) doc.outputs.directory = rd.text(out["directory"], "outputs.directory");
    if (out["plots"].IsDefined()) doc.outputs.plots = rd.boolean(out["plots"], "outputs.plots");
  }

  try {
    s.validate();
  } catch (const ScenarioError& e) {
    throw ScenarioParseError(origin + ": " + e.what());
  }
  return doc;
}

ScenarioDocument parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.string());
}

}  // namespace etmas
