#pragma once

// Deception attacks on a compromised agent.
//
// Sensor channel:   the monitored tracking error is replaced by q^c.
//   SENSOR_REPLAY    q^c = q^E + theta 1_n, q^E the tracking error sampled at
//                    the agent's last event before onset, theta ~ U(a, b) drawn
//                    once so that the CS_ETM predicate can never fire.
//   SENSOR_ADDITIVE  q^c = q - d_i x^a(t)   (x^c = x + x^a on the state sensor)
// Actuator channel: u^c = u + u^a(t).
//   ACTUATOR_CONSTANT  u^a(t) = value
//   ACTUATOR_SIGNAL    u^a(t) piecewise constant from a sample table

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "etmas/triggering.hpp"

namespace etmas {

class AttackError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Replay cannot be armed around a zero held sample: the admissible theta
// interval is empty.
class DegenerateAttack : public AttackError {
 public:
  using AttackError::AttackError;
};

enum class AttackChannel { SENSOR_REPLAY, SENSOR_ADDITIVE, ACTUATOR_CONSTANT, ACTUATOR_SIGNAL };

std::string_view to_string(AttackChannel c);
AttackChannel channel_from_string(std::string_view s);
bool is_sensor_channel(AttackChannel c);

// Zero-order-hold sample table. Before the first sample the signal is zero.
struct Signal {
  std::vector<double> times;  // strictly increasing
  std::vector<Eigen::VectorXd> values;

  static Signal constant(Eigen::VectorXd v) { return {{0.0}, {std::move(v)}}; }
  Eigen::VectorXd at(double t, Eigen::Index dim) const;
};

struct AttackSpec {
  std::size_t agent = 1;  // 1-based
  AttackChannel channel = AttackChannel::SENSOR_REPLAY;
  double onset = 0.0;
  std::optional<double> theta;  // SENSOR_REPLAY override
  Eigen::VectorXd value;        // ACTUATOR_CONSTANT
  Signal signal;                // SENSOR_ADDITIVE, ACTUATOR_SIGNAL

  bool active(double t) const;
};

// Slack used when comparing grid times against onsets.
inline constexpr double kOnsetSlack = 1e-9;

void validate_attacks(const std::vector<AttackSpec>& specs, std::size_t n_agents, Eigen::Index state_dim,
                      Eigen::Index input_dim);

struct ReplayBounds {
  double lower = 0.0;  // a_i
  double upper = 0.0;  // b_i
};

struct ReplayState {
  Eigen::VectorXd q_eavesdropped;
  double theta = 0.0;
  ReplayBounds bounds;
  double armed_at = 0.0;
  double sampled_at = 0.0;          // time of the eavesdropped event
  bool within_guarantee = true;     // false for vector agents or theta overrides outside (a, b)
  Eigen::VectorXd output;           // q^c, constant after arming
};

// a = |q_tk| / (1 + eta) - |q^E|,  b = |q_tk| / (1 - eta) - |q^E|
ReplayBounds replay_bounds(double q_tk_norm, double q_e_norm, double eta);

// For scalar a = |q^c|, b = |q(t_k)|: (a - b)^2 - eta^2 a^2, expanded and in
// root form. Negative exactly when b / (1 + eta) < a < b / (1 - eta), i.e. when
// the CS_ETM predicate stays silent.
double trigger_quadratic(double a, double b, double eta);
double trigger_quadratic_factored(double a, double b, double eta);

// Deterministic uniform source on the open interval (0, 1).
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  std::mt19937_64 engine_;
};

// theta = a + u (b - a), kept strictly inside (a, b).
double sample_theta(const ReplayBounds& bounds, double u);
double sample_theta(const ReplayBounds& bounds, UniformSource& rng);

ReplayState arm_replay(std::size_t i, const NetworkBuffers& buffers, const Eigen::VectorXd& q_tk, double eta,
                       UniformSource& rng, std::optional<double> theta_override = std::nullopt, double t = 0.0);

// `replay` must be armed for an active SENSOR_REPLAY spec; `degree` is d_i.
Eigen::VectorXd apply_sensor_attack(const Eigen::VectorXd& q_true, const AttackSpec& spec, const ReplayState* replay,
                                    double t, std::size_t degree);

Eigen::VectorXd apply_actuator_attack(const Eigen::VectorXd& u_nominal, const AttackSpec& spec, double t);

}  // namespace etmas
