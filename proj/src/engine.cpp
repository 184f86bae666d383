#include "etmas/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace etmas {

std::size_t Scenario::steps() const {
  return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

void Scenario::validate() const {
  const std::size_t n = n_agents();
  if (n == 0) throw ScenarioError("graph.agents: must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ScenarioError("sim.dt: must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw ScenarioError("sim.horizon: must be >= dt");

  try {
    check_compatible(dynamics, gain);
  } catch (const DynamicsError& e) {
    throw ScenarioError(std::string("gain.K: ") + e.what());
  }
  try {
    trigger.validate(n);
  } catch (const TriggerError& e) {
    throw ScenarioError(std::string("trigger.eta: ") + e.what());
  }
  if (trigger.mechanism == Mechanism::S_ETM && dynamics.state_dim() != 1)
    throw ScenarioError("trigger.mechanism: S_ETM requires scalar agents (state dimension 1)");

  if (x0.size() != n) throw ScenarioError("initial_states: expected " + std::to_string(n) + " agent states");
  for (const auto& xi : x0) {
    if (xi.size() != dynamics.state_dim())
      throw ScenarioError("initial_states: each agent needs " + std::to_string(dynamics.state_dim()) + " values");
    if (!xi.allFinite()) throw ScenarioError("initial_states: values must be finite");
  }

  try {
    validate_attacks(attacks, n, dynamics.state_dim(), dynamics.input_dim());
  } catch (const AttackError& e) {
    throw ScenarioError(std::string("attacks: ") + e.what());
  }
  for (const auto& a : attacks) {
    if (a.channel == AttackChannel::SENSOR_REPLAY && trigger.mechanism != Mechanism::CS_ETM)
      throw ScenarioError("attacks: SENSOR_REPLAY targets the CS_ETM tracking-error monitor");
  }

  if (allow_unverified_gain) return;
  if (!is_connected(graph)) throw ScenarioError("graph.edges: graph must be connected");
  if (n > 1) {
    const auto report = verify_gain(dynamics, gain, laplacian_eigenvalues(graph));
    if (!report.all_hurwitz())
      throw ScenarioError("gain.K: A - lambda_i B K is not Hurwitz for every nonzero Laplacian eigenvalue");
  }
}

std::string flag_names(unsigned flags) {
  if (flags == kNominal) return "NOMINAL";
  std::string out;
  const auto add = [&](unsigned bit, const char* name) {
    if (!(flags & bit)) return;
    if (!out.empty()) out += "|";
    out += name;
  };
  add(kNonTriggering, "NON_TRIGGERING");
  add(kContinuousTriggering, "CONTINUOUS_TRIGGERING");
  add(kDiverged, "DIVERGED");
  return out;
}

Eigen::VectorXd Trace::state(std::size_t k, std::size_t agent) const {
  return states.row(static_cast<Eigen::Index>(k))
      .segment(static_cast<Eigen::Index>(agent) * state_dim, state_dim)
      .transpose();
}

std::vector<Eigen::VectorXd> Trace::states_at(std::size_t k) const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) out.push_back(state(k, i));
  return out;
}

std::vector<double> Trace::event_times(std::size_t agent) const {
  std::vector<double> out;
  out.reserve(event_steps[agent].size());
  for (auto k : event_steps[agent]) out.push_back(times[k]);
  return out;
}

std::size_t Trace::step_at(double t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t - kOnsetSlack);
  return std::min(static_cast<std::size_t>(it - times.begin()), rows() == 0 ? 0 : rows() - 1);
}

namespace {

struct AgentAttacks {
  const AttackSpec* sensor = nullptr;
  const AttackSpec* actuator = nullptr;
  std::size_t log_index = 0;  // sensor entry in the attack log
};

bool out_of_bounds(const Eigen::VectorXd& x) {
  return !x.allFinite() || x.cwiseAbs().maxCoeff() > kDivergenceBound;
}

}  // namespace

Trace simulate(const Scenario& s) {
  s.validate();

  const std::size_t n = s.n_agents();
  const Eigen::Index nd = s.dynamics.state_dim();
  const Eigen::Index md = s.dynamics.input_dim();
  const std::size_t steps = s.steps();
  const auto rows = static_cast<Eigen::Index>(steps + 1);
  const auto idx = [](std::size_t i) { return static_cast<Eigen::Index>(i); };

  Trace tr;
  tr.n_agents = n;
  tr.state_dim = nd;
  tr.input_dim = md;
  tr.mechanism = s.trigger.mechanism;
  tr.dt = s.dt;
  tr.horizon = static_cast<double>(steps) * s.dt;
  tr.times.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) tr.times[k] = static_cast<double>(k) * s.dt;
  tr.states.resize(rows, idx(n) * nd);
  tr.controls.resize(rows, idx(n) * md);
  tr.monitor_error.resize(rows, idx(n));
  tr.monitor_threshold.resize(rows, idx(n));
  tr.event_steps.assign(n, {});

  std::vector<AgentAttacks> attacked(n);
  for (const auto& a : s.attacks) {
    auto& slot = attacked[a.agent - 1];
    if (is_sensor_channel(a.channel)) {
      slot.sensor = &a;
      slot.log_index = tr.attack_log.size();
    } else {
      slot.actuator = &a;
    }
    tr.attack_log.push_back({a, std::nullopt, {}});
  }

  std::vector<Eigen::VectorXd> x = s.x0;
  for (std::size_t i = 0; i < n; ++i) tr.states.row(0).segment(idx(i) * nd, nd) = x[i].transpose();

  NetworkBuffers buffers(s.graph, x);
  UniformSource rng(s.seed);
  std::vector<std::optional<ReplayState>> replay(n);
  std::vector<bool> replay_settled(n, false);  // armed or refused

  std::vector<Eigen::VectorXd> measured_x(n), measured_q(n);
  std::vector<char> fired(n, 0);

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = tr.times[k];

    // Own-state sensor reading and tracking error, with sensor attacks applied.
    const auto measure = [&](std::size_t i) {
      const AttackSpec* sensor = attacked[i].sensor;
      measured_x[i] = x[i];
      if (sensor && sensor->channel == AttackChannel::SENSOR_ADDITIVE && sensor->active(t))
        measured_x[i] += sensor->signal.at(t, nd);
      Eigen::VectorXd q = local_tracking_error(i, measured_x[i], buffers);
      if (sensor && sensor->channel == AttackChannel::SENSOR_REPLAY && replay[i]) q = replay[i]->output;
      measured_q[i] = std::move(q);
    };

    if (k == 0) {
      for (std::size_t i = 0; i < n; ++i) measure(i);
      for (std::size_t i = 0; i < n; ++i) {
        buffers.on_trigger(i, t, measured_x[i], measured_q[i]);
        tr.event_steps[i].push_back(0);
        tr.monitor_error(0, idx(i)) = 0.0;
        tr.monitor_threshold(0, idx(i)) = 0.0;
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      const AttackSpec* sensor = attacked[i].sensor;
      if (!sensor || sensor->channel != AttackChannel::SENSOR_REPLAY || replay_settled[i] || !sensor->active(t))
        continue;
      replay_settled[i] = true;
      auto& entry = tr.attack_log[attacked[i].log_index];
      try {
        replay[i] = arm_replay(i, buffers, buffers.agent(i).held_q, s.trigger.eta[i], rng, sensor->theta, t);
        entry.replay = replay[i];
        if (!replay[i]->within_guarantee) entry.note = "armed outside the scalar same-sign guarantee";
      } catch (const DegenerateAttack& e) {
        entry.note = std::string("not armed: ") + e.what();
      }
    }

    if (k > 0) {
      for (std::size_t i = 0; i < n; ++i) measure(i);
      for (std::size_t i = 0; i < n; ++i) {
        // Without neighbors there is no relative term to monitor.
        if (s.graph.degree(i) == 0) {
          tr.monitor_error(idx(k), idx(i)) = 0.0;
          tr.monitor_threshold(idx(k), idx(i)) = 0.0;
          fired[i] = 0;
          continue;
        }
        const auto& me = buffers.agent(i);
        const double eta = s.trigger.eta[i];
        double lhs = 0.0;
        double rhs = 0.0;
        if (s.trigger.mechanism == Mechanism::CS_ETM) {
          lhs = cs_measurement_error(measured_q[i], me).norm();
          rhs = eta * measured_q[i].norm();
        } else {
          const double e = s_measurement_error(me.held_x, measured_x[i])(0);
          const double rel = -measured_q[i](0);
          lhs = e * e;
          rhs = eta * rel * rel;
        }
        tr.monitor_error(idx(k), idx(i)) = lhs;
        tr.monitor_threshold(idx(k), idx(i)) = rhs;
        fired[i] = lhs >= rhs;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!fired[i]) continue;
        buffers.on_trigger(i, t, measured_x[i], measured_q[i]);
        tr.event_steps[i].push_back(k);
      }
    }

    std::vector<Eigen::VectorXd> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = s.trigger.mechanism == Mechanism::CS_ETM ? cs_control(s.gain, buffers.agent(i))
                                                      : s_control(s.gain, i, buffers);
      if (attacked[i].actuator) u[i] = apply_actuator_attack(u[i], *attacked[i].actuator, t);
      tr.controls.row(idx(k)).segment(idx(i) * md, md) = u[i].transpose();
    }

    if (k == steps) break;

    for (std::size_t i = 0; i < n; ++i) {
      x[i] = propagate(s.dynamics, x[i], u[i], s.dt);
      if (out_of_bounds(x[i])) tr.diverged_agents.push_back(i);
    }
    if (!tr.diverged_agents.empty()) {
      // Keep rows 0..k; the offending state is not representable.
      tr.diverged = true;
      const auto keep = idx(k + 1);
      tr.times.resize(k + 1);
      tr.states.conservativeResize(keep, Eigen::NoChange);
      tr.controls.conservativeResize(keep, Eigen::NoChange);
      tr.monitor_error.conservativeResize(keep, Eigen::NoChange);
      tr.monitor_threshold.conservativeResize(keep, Eigen::NoChange);
      break;
    }
    for (std::size_t i = 0; i < n; ++i) tr.states.row(idx(k + 1)).segment(idx(i) * nd, nd) = x[i].transpose();
  }

  tr.flags = classify_agents(tr, s.attacks);
  return tr;
}

bool detect_non_triggering(const Trace& tr, std::size_t i, double from_t) {
  const auto& ev = tr.event_steps[i];
  return std::none_of(ev.begin(), ev.end(), [&](std::size_t k) { return tr.times[k] > from_t + kOnsetSlack; });
}

std::size_t longest_trigger_run(const Trace& tr, std::size_t i, double from_t) {
  std::size_t best = 0;
  std::size_t run = 0;
  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (auto k : tr.event_steps[i]) {
    if (tr.times[k] < from_t - kOnsetSlack) continue;
    run = (run > 0 && k == prev + 1) ? run + 1 : 1;
    prev = k;
    best = std::max(best, run);
  }
  return best;
}

bool detect_continuous_triggering(const Trace& tr, std::size_t i, std::size_t window, double from_t) {
  if (window < 2) throw std::invalid_argument("continuous-triggering window must be >= 2");
  return longest_trigger_run(tr, i, from_t) >= window;
}

std::vector<unsigned> classify_agents(const Trace& tr, const std::vector<AttackSpec>& specs, std::size_t window) {
  std::vector<unsigned> flags(tr.n_agents, kNominal);
  std::optional<double> first_onset;
  for (const auto& a : specs) first_onset = std::min(first_onset.value_or(a.onset), a.onset);

  for (std::size_t i = 0; i < tr.n_agents; ++i) {
    if (first_onset && *first_onset < tr.horizon && detect_non_triggering(tr, i, *first_onset))
      flags[i] |= kNonTriggering;
    if (detect_continuous_triggering(tr, i, window, first_onset.value_or(0.0))) flags[i] |= kContinuousTriggering;
  }
  for (auto i : tr.diverged_agents) flags[i] |= kDiverged;
  return flags;
}

}  // namespace etmas
