#include <gtest/gtest.h>

#include <cmath>

#include "etmas/attack.hpp"

using namespace etmas;

namespace {

Eigen::VectorXd v1(double a) { return Eigen::VectorXd::Constant(1, a); }

// One agent with a single neighbor, already sampled with the given q.
struct Sampled {
  Graph g = path_graph(2);
  NetworkBuffers buf{g, {v1(0), v1(0)}};
  explicit Sampled(double q, double t = 0.0) { buf.on_trigger(0, t, v1(0), v1(q)); }
};

AttackSpec replay_spec(double onset) {
  AttackSpec s;
  s.agent = 1;
  s.channel = AttackChannel::SENSOR_REPLAY;
  s.onset = onset;
  return s;
}

}  // namespace

TEST(ReplayBounds, ClosedForms) {
  auto b = replay_bounds(1, 1, 0.01);
  EXPECT_NEAR(b.lower, 1 / 1.01 - 1, 1e-12);
  EXPECT_NEAR(b.upper, 1 / 0.99 - 1, 1e-12);
  EXPECT_NEAR(b.lower, -0.00990099, 1e-8);
  EXPECT_NEAR(b.upper, 0.01010101, 1e-8);

  b = replay_bounds(2, 0, 0.5);
  EXPECT_NEAR(b.lower, 2 / 1.5, 1e-12);
  EXPECT_NEAR(b.upper, 4.0, 1e-12);

  b = replay_bounds(1, 1, 0.99);
  EXPECT_NEAR(b.lower, 1 / 1.99 - 1, 1e-12);
  EXPECT_NEAR(b.upper, 99.0, 1e-9);
}

TEST(ReplayBounds, Errors) {
  EXPECT_THROW(replay_bounds(1, 1, 0.0), AttackError);
  EXPECT_THROW(replay_bounds(1, 1, 1.0), AttackError);
  EXPECT_THROW(replay_bounds(-1, 1, 0.5), AttackError);
  EXPECT_THROW(replay_bounds(0, 0, 0.5), DegenerateAttack);
}

TEST(SampleTheta, AffineMap) {
  EXPECT_EQ(sample_theta({0, 1}, 0.5), 0.5);
  EXPECT_EQ(sample_theta({-1, 1}, 0.0), std::nextafter(-1.0, 1.0));
  EXPECT_EQ(sample_theta({-1, 1}, 1.0), std::nextafter(1.0, -1.0));
  EXPECT_THROW(sample_theta({1, 1}, 0.5), AttackError);
  EXPECT_THROW(sample_theta({2, 1}, 0.5), AttackError);
}

TEST(SampleTheta, LawOfLargeNumbers) {
  UniformSource rng(12345);
  double sum = 0.0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const double u = sample_theta({0, 1}, rng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / draws, 0.5, 0.01);
}

TEST(SampleTheta, Reproducible) {
  UniformSource a(77), b(77), c(78);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(UniformSource(77).next(), c.next());
}

TEST(ArmReplay, PositiveScalarLandsInsideInterval) {
  Sampled s(1.0, 0.4);
  UniformSource rng(1);
  for (int k = 0; k < 1000; ++k) {
    const auto st = arm_replay(0, s.buf, v1(1.0), 0.01, rng, std::nullopt, 5.0);
    EXPECT_GT(st.output(0), 1 / 1.01);
    EXPECT_LT(st.output(0), 1 / 0.99);
    EXPECT_EQ(st.output(0), 1.0 + st.theta);
    EXPECT_TRUE(st.within_guarantee);
    EXPECT_EQ(st.sampled_at, 0.4);
    EXPECT_EQ(st.armed_at, 5.0);
  }
}

TEST(ArmReplay, NegativeScalarRestoresSign) {
  Sampled s(-1.0);
  UniformSource rng(2);
  for (int k = 0; k < 1000; ++k) {
    const auto st = arm_replay(0, s.buf, v1(-1.0), 0.01, rng);
    // The construction runs on |q| and keeps the sign: q^c = -(1 + theta).
    EXPECT_EQ(st.output(0), -(1.0 + st.theta));
    EXPECT_GT(std::abs(st.output(0)), 1 / 1.01);
    EXPECT_LT(std::abs(st.output(0)), 1 / 0.99);
    EXPECT_FALSE(cs_trigger_check(st.output - v1(-1.0), st.output, 0.01));
  }
}

TEST(ArmReplay, ZeroSampleIsDegenerate) {
  Sampled s(0.0);
  UniformSource rng(3);
  EXPECT_THROW(arm_replay(0, s.buf, v1(0.0), 0.01, rng), DegenerateAttack);
}

TEST(ArmReplay, RequiresAnEvent) {
  const auto g = path_graph(2);
  NetworkBuffers buf(g, {v1(0), v1(1)});
  UniformSource rng(4);
  EXPECT_THROW(arm_replay(0, buf, v1(1.0), 0.01, rng), AttackError);
}

TEST(ArmReplay, VectorAgentsAreFlagged) {
  const auto g = path_graph(2);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
  NetworkBuffers buf(g, {z, z});
  const Eigen::VectorXd q = (Eigen::VectorXd(2) << 1.0, -2.0).finished();
  buf.on_trigger(0, 0.0, z, q);
  UniformSource rng(5);
  const auto st = arm_replay(0, buf, q, 0.1, rng);
  EXPECT_FALSE(st.within_guarantee);
  EXPECT_EQ(st.output, q + Eigen::VectorXd::Constant(2, st.theta));
}

TEST(ArmReplay, ThetaOverride) {
  Sampled s(2.0);
  UniformSource rng(6);
  const auto st = arm_replay(0, s.buf, v1(2.0), 0.01, rng, 0.005);
  EXPECT_EQ(st.output(0), 2.005);
  EXPECT_TRUE(st.within_guarantee);
  const auto outside = arm_replay(0, s.buf, v1(2.0), 0.01, rng, 1.0);
  EXPECT_FALSE(outside.within_guarantee);
}

TEST(ArmReplay, NonTriggeringGuaranteeGrid) {
  std::size_t checked = 0;
  for (double q : {1e-6, 1e-3, 0.043, 0.5, 1.0, 7.0, 250.0}) {
    for (double eta : {1e-4, 1e-3, 0.01, 0.05, 0.2, 0.5, 0.9, 0.99}) {
      Sampled s(q);
      UniformSource unused(0);
      const auto bounds = replay_bounds(q, q, eta);
      ASSERT_LT(bounds.lower, bounds.upper);
      std::vector<double> quantiles = {1e-9, 1.0 - 1e-9};
      for (int k = 1; k < 1000; ++k) quantiles.push_back(k / 1000.0);
      for (double u : quantiles) {
        for (double sign : {1.0, -1.0}) {
          const double theta = sample_theta(bounds, u);
          const auto st = arm_replay(0, s.buf, v1(sign * q), eta, unused, theta);
          ASSERT_TRUE(st.within_guarantee);
          EXPECT_FALSE(cs_trigger_check(st.output - v1(sign * q), st.output, eta))
              << "q=" << q << " eta=" << eta << " u=" << u;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 100000u);
}

TEST(ApplySensorAttack, Passthrough) {
  const auto spec = replay_spec(5.0);
  EXPECT_EQ(apply_sensor_attack(v1(0.7), spec, nullptr, 4.0, 1)(0), 0.7);
}

TEST(ApplySensorAttack, ReplayIsConstantAfterOnset) {
  Sampled s(2.0);
  UniformSource rng(9);
  const auto st = arm_replay(0, s.buf, v1(2.0), 0.01, rng, 0.005);
  const auto spec = replay_spec(1.0);
  for (double t : {1.0, 1.5, 3.0, 100.0}) {
    EXPECT_EQ(apply_sensor_attack(v1(-50.0 * t), spec, &st, t, 1)(0), 2.005);
  }
}

TEST(ApplySensorAttack, ReplayWithoutArmingFails) {
  EXPECT_THROW(apply_sensor_attack(v1(1.0), replay_spec(0.0), nullptr, 1.0, 1), AttackError);
}

TEST(ApplySensorAttack, Additive) {
  AttackSpec spec;
  spec.channel = AttackChannel::SENSOR_ADDITIVE;
  spec.onset = 0.0;
  spec.signal = Signal::constant(v1(0.5));
  EXPECT_EQ(apply_sensor_attack(v1(1.0), spec, nullptr, 0.3, 2)(0), 0.0);
}

TEST(ApplyActuatorAttack, Examples) {
  AttackSpec spec;
  spec.channel = AttackChannel::ACTUATOR_CONSTANT;
  spec.onset = 6.0;
  spec.value = v1(-1.0);
  EXPECT_DOUBLE_EQ(apply_actuator_attack(v1(0.3), spec, 7.0)(0), -0.7);
  EXPECT_EQ(apply_actuator_attack(v1(0.3), spec, 5.0)(0), 0.3);
  spec.value = v1(0.0);
  for (double t : {0.0, 6.0, 9.0}) EXPECT_EQ(apply_actuator_attack(v1(0.3), spec, t)(0), 0.3);
}

TEST(ApplyActuatorAttack, SignalIsZeroOrderHold) {
  AttackSpec spec;
  spec.channel = AttackChannel::ACTUATOR_SIGNAL;
  spec.onset = 0.0;
  spec.signal.times = {1.0, 2.0};
  spec.signal.values = {v1(3.0), v1(-1.0)};
  EXPECT_EQ(apply_actuator_attack(v1(0.0), spec, 0.5)(0), 0.0);
  EXPECT_EQ(apply_actuator_attack(v1(0.0), spec, 1.0)(0), 3.0);
  EXPECT_EQ(apply_actuator_attack(v1(0.0), spec, 1.99)(0), 3.0);
  EXPECT_EQ(apply_actuator_attack(v1(0.0), spec, 2.5)(0), -1.0);
}

TEST(Attacks, ChannelsAreIndependent) {
  Sampled s(1.5);
  UniformSource rng(10);
  const auto st = arm_replay(0, s.buf, v1(1.5), 0.01, rng);
  const auto sensor = replay_spec(0.0);
  AttackSpec actuator;
  actuator.channel = AttackChannel::ACTUATOR_CONSTANT;
  actuator.value = v1(-1.0);
  // Neither output depends on the other channel's spec or output.
  const auto q1 = apply_sensor_attack(v1(0.2), sensor, &st, 1.0, 1);
  const auto u1 = apply_actuator_attack(v1(0.4), actuator, 1.0);
  const auto q2 = apply_sensor_attack(v1(0.2), sensor, &st, 1.0, 1);
  EXPECT_EQ(q1, q2);
  EXPECT_EQ(u1(0), 0.4 - 1.0);
}

TEST(ValidateAttacks, Rules) {
  AttackSpec a = replay_spec(1.0);
  EXPECT_NO_THROW(validate_attacks({a}, 2, 1, 1));
  a.agent = 3;
  EXPECT_THROW(validate_attacks({a}, 2, 1, 1), AttackError);
  a.agent = 1;
  a.onset = -1;
  EXPECT_THROW(validate_attacks({a}, 2, 1, 1), AttackError);

  AttackSpec add;
  add.channel = AttackChannel::SENSOR_ADDITIVE;
  add.signal = Signal::constant(v1(1.0));
  EXPECT_THROW(validate_attacks({replay_spec(1.0), add}, 2, 1, 1), AttackError);

  AttackSpec act;
  act.channel = AttackChannel::ACTUATOR_CONSTANT;
  act.value = v1(1.0);
  EXPECT_NO_THROW(validate_attacks({replay_spec(1.0), act}, 2, 1, 1));
  EXPECT_THROW(validate_attacks({act, act}, 2, 1, 1), AttackError);
  act.value = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(validate_attacks({act}, 2, 1, 1), AttackError);
}
