#include <gtest/gtest.h>

#include "etmas/analysis.hpp"
#include "etmas/batch.hpp"
#include "etmas/fixtures.hpp"

using namespace etmas;

TEST(SeedSweep, AssignsConsecutiveSeeds) {
  const auto base = load_fixture("sec5a_replay").scenario;
  const auto sweep = seed_sweep(base, 40, 3);
  ASSERT_EQ(sweep.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(sweep[k].seed, 40 + k);
}

TEST(Batch, ParallelMatchesSerialBitForBit) {
  auto base = load_fixture("sec5a_replay").scenario;
  base.horizon = 6.0;
  auto scenarios = seed_sweep(base, 0, 8);
  auto sb = load_fixture("sec5b_actuator").scenario;
  scenarios.push_back(sb);

  const auto serial = run_batch_serial(scenarios);
  const auto parallel = run_batch_parallel(scenarios, 4);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) {
    EXPECT_EQ(serial[k].states, parallel[k].states);
    EXPECT_EQ(serial[k].controls, parallel[k].controls);
    EXPECT_EQ(serial[k].event_steps, parallel[k].event_steps);
    EXPECT_EQ(serial[k].flags, parallel[k].flags);
  }
  // Different seeds draw different theta.
  EXPECT_NE(serial[0].attack_log[0].replay->theta, serial[1].attack_log[0].replay->theta);
}

TEST(Batch, ParallelRethrowsLowestFailingIndex) {
  auto good = load_fixture("sec5b_actuator").scenario;
  good.horizon = 0.1;
  auto bad = good;
  bad.dt = -1.0;
  auto worse = good;
  worse.x0.clear();
  EXPECT_THROW(
      {
        try {
          run_batch_parallel({good, bad, worse}, 3);
        } catch (const ScenarioError& e) {
          EXPECT_NE(std::string(e.what()).find("sim.dt"), std::string::npos);
          throw;
        }
      },
      ScenarioError);
}

TEST(Batch, DisagreementSeriesMatchesSerial) {
  const auto tr = simulate(load_fixture("sec5b_actuator").scenario);
  const auto serial = disagreement_series_serial(tr);
  const auto parallel = disagreement_series_parallel(tr, 4);
  ASSERT_EQ(serial.size(), tr.rows());
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(serial[0], disagreement_at(tr, 0));
}
