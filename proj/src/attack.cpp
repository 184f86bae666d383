#include "etmas/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace etmas {

std::string_view to_string(AttackChannel c) {
  switch (c) {
    case AttackChannel::SENSOR_REPLAY: return "SENSOR_REPLAY";
    case AttackChannel::SENSOR_ADDITIVE: return "SENSOR_ADDITIVE";
    case AttackChannel::ACTUATOR_CONSTANT: return "ACTUATOR_CONSTANT";
    case AttackChannel::ACTUATOR_SIGNAL: return "ACTUATOR_SIGNAL";
  }
  return "?";
}

AttackChannel channel_from_string(std::string_view s) {
  for (auto c : {AttackChannel::SENSOR_REPLAY, AttackChannel::SENSOR_ADDITIVE, AttackChannel::ACTUATOR_CONSTANT,
                 AttackChannel::ACTUATOR_SIGNAL}) {
    if (s == to_string(c)) return c;
  }
  throw AttackError("unknown attack channel '" + std::string(s) + "'");
}

bool is_sensor_channel(AttackChannel c) {
  return c == AttackChannel::SENSOR_REPLAY || c == AttackChannel::SENSOR_ADDITIVE;
}

Eigen::VectorXd Signal::at(double t, Eigen::Index dim) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t + kOnsetSlack);
  if (it == times.begin()) return Eigen::VectorXd::Zero(dim);
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

bool AttackSpec::active(double t) const { return t >= onset - kOnsetSlack; }

void validate_attacks(const std::vector<AttackSpec>& specs, std::size_t n_agents, Eigen::Index state_dim,
                      Eigen::Index input_dim) {
  std::vector<int> sensor(n_agents, 0), actuator(n_agents, 0);
  for (const auto& s : specs) {
    const std::string who = "attack on agent " + std::to_string(s.agent);
    if (s.agent < 1 || s.agent > n_agents) throw AttackError(who + ": agent out of range");
    if (!(s.onset >= 0.0) || !std::isfinite(s.onset)) throw AttackError(who + ": onset must be >= 0");
    auto& count = is_sensor_channel(s.channel) ? sensor[s.agent - 1] : actuator[s.agent - 1];
    if (++count > 1)
      throw AttackError(who + ": at most one " + (is_sensor_channel(s.channel) ? "sensor" : "actuator") +
                        " attack per agent");

    const auto check_signal = [&](const Signal& sig, Eigen::Index dim) {
      if (sig.times.empty() || sig.times.size() != sig.values.size())
        throw AttackError(who + ": signal needs matching, nonempty times and values");
      for (std::size_t k = 0; k < sig.times.size(); ++k) {
        if (k > 0 && !(sig.times[k] > sig.times[k - 1])) throw AttackError(who + ": signal times must increase");
        if (sig.values[k].size() != dim) throw AttackError(who + ": signal value has wrong dimension");
      }
    };
    switch (s.channel) {
      case AttackChannel::SENSOR_REPLAY:
        if (s.theta && !std::isfinite(*s.theta)) throw AttackError(who + ": theta must be finite");
        break;
      case AttackChannel::SENSOR_ADDITIVE: check_signal(s.signal, state_dim); break;
      case AttackChannel::ACTUATOR_CONSTANT:
        if (s.value.size() != input_dim) throw AttackError(who + ": value must have input dimension");
        break;
      case AttackChannel::ACTUATOR_SIGNAL: check_signal(s.signal, input_dim); break;
    }
  }
}

ReplayBounds replay_bounds(double q_tk_norm, double q_e_norm, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw AttackError("replay bounds need eta in (0,1)");
  if (!(q_tk_norm >= 0.0) || !(q_e_norm >= 0.0)) throw AttackError("replay bounds need nonnegative norms");
  if (q_tk_norm == 0.0) throw DegenerateAttack("held tracking error is zero; replay interval is empty");
  return {q_tk_norm / (1.0 + eta) - q_e_norm, q_tk_norm / (1.0 - eta) - q_e_norm};
}

double trigger_quadratic(double a, double b, double eta) {
  const double c = (1.0 - eta) * (1.0 + eta);
  return c * a * a - 2.0 * a * b + b * b;
}

double trigger_quadratic_factored(double a, double b, double eta) {
  return (1.0 - eta) * (1.0 + eta) * (a - b / (1.0 - eta)) * (a - b / (1.0 + eta));
}

double UniformSource::next() {
  // 53 random bits -> [0, 1); zero is redrawn.
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double sample_theta(const ReplayBounds& bounds, double u) {
  if (!(bounds.lower < bounds.upper)) throw AttackError("theta bounds must satisfy a < b");
  const double theta = bounds.lower + u * (bounds.upper - bounds.lower);
  if (theta <= bounds.lower) return std::nextafter(bounds.lower, bounds.upper);
  if (theta >= bounds.upper) return std::nextafter(bounds.upper, bounds.lower);
  return theta;
}

double sample_theta(const ReplayBounds& bounds, UniformSource& rng) { return sample_theta(bounds, rng.next()); }

ReplayState arm_replay(std::size_t i, const NetworkBuffers& buffers, const Eigen::VectorXd& q_tk, double eta,
                       UniformSource& rng, std::optional<double> theta_override, double t) {
  const auto& me = buffers.agent(i);
  if (!me.sampled) throw AttackError("replay on agent " + std::to_string(i + 1) + " before any recorded event");

  const double norm = q_tk.norm();
  ReplayState st;
  st.q_eavesdropped = q_tk;
  st.bounds = replay_bounds(norm, norm, eta);
  st.theta = theta_override ? *theta_override : sample_theta(st.bounds, rng);
  st.armed_at = t;
  st.sampled_at = me.last_trigger_time;

  if (q_tk.size() == 1) {
    // Bounds are derived on |q|; a negative sample keeps its sign.
    const double sign = q_tk(0) < 0.0 ? -1.0 : 1.0;
    st.output = Eigen::VectorXd::Constant(1, sign * (std::abs(q_tk(0)) + st.theta));
    st.within_guarantee = st.theta > st.bounds.lower && st.theta < st.bounds.upper;
  } else {
    st.output = q_tk + Eigen::VectorXd::Constant(q_tk.size(), st.theta);
    st.within_guarantee = false;
  }
  return st;
}

Eigen::VectorXd apply_sensor_attack(const Eigen::VectorXd& q_true, const AttackSpec& spec, const ReplayState* replay,
                                    double t, std::size_t degree) {
  if (!spec.active(t)) return q_true;
  switch (spec.channel) {
    case AttackChannel::SENSOR_REPLAY:
      if (replay == nullptr) throw AttackError("replay attack active but never armed (nothing eavesdropped)");
      return replay->output;
    case AttackChannel::SENSOR_ADDITIVE:
      return q_true - static_cast<double>(degree) * spec.signal.at(t, q_true.size());
    default: throw AttackError("not a sensor attack");
  }
}

Eigen::VectorXd apply_actuator_attack(const Eigen::VectorXd& u_nominal, const AttackSpec& spec, double t) {
  if (!spec.active(t)) return u_nominal;
  switch (spec.channel) {
    case AttackChannel::ACTUATOR_CONSTANT: return u_nominal + spec.value;
    case AttackChannel::ACTUATOR_SIGNAL: return u_nominal + spec.signal.at(t, u_nominal.size());
    default: throw AttackError("not an actuator attack");
  }
}

}  // namespace etmas
