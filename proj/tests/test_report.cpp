#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "etmas/fixtures.hpp"
#include "etmas/report.hpp"

using namespace etmas;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("etmas_report_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1e-3 * 5101}) {
    const auto s = format_double(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(5.0), "5");
}

TEST(Csv, StatesRoundTripExactly) {
  const auto dir = scratch("roundtrip");
  fs::create_directories(dir);
  const auto tr = simulate(load_fixture("sec5a_replay").scenario);
  write_states_csv(tr, dir / "states.csv");
  const auto table = read_series_csv(dir / "states.csv");
  EXPECT_EQ(table.header.front(), "time");
  EXPECT_EQ(table.header[1], "x1");
  EXPECT_EQ(table.header.back(), "x8");
  EXPECT_EQ(table.times, tr.times);
  EXPECT_EQ(table.values, tr.states);

  write_controls_csv(tr, dir / "controls.csv");
  EXPECT_EQ(read_series_csv(dir / "controls.csv").values, tr.controls);
}

TEST(Csv, VectorHeaders) {
  auto doc = parse_scenario_text(R"(graph: {agents: 2, edges: [[1, 2]]}
dynamics: {A: [[0, 0], [0, 0]], B: [[1, 0], [0, 1]]}
gain: {K: [[1, 0], [0, 1]]}
trigger: {mechanism: CS_ETM, eta: 0.1}
initial_states: [[1, 2], [3, 4]]
sim: {horizon: 0.01}
)");
  const auto dir = scratch("vector");
  fs::create_directories(dir);
  const auto tr = simulate(doc.scenario);
  write_states_csv(tr, dir / "states.csv");
  const auto table = read_series_csv(dir / "states.csv");
  EXPECT_EQ(table.header, (std::vector<std::string>{"time", "x1_1", "x1_2", "x2_1", "x2_2"}));
  EXPECT_EQ(table.values, tr.states);
}

TEST(Csv, EventsListEveryEvent) {
  const auto dir = scratch("events");
  fs::create_directories(dir);
  const auto tr = simulate(load_fixture("sec5b_actuator").scenario);
  write_events_csv(tr, dir / "events.csv");
  std::ifstream in(dir / "events.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "agent,step,time");
  std::size_t rows = 0, total = 0;
  while (std::getline(in, line)) ++rows;
  for (const auto& ev : tr.event_steps) total += ev.size();
  EXPECT_EQ(rows, total);
}

TEST(RunScenario, IdenticalInvocationsAreByteIdentical) {
  const auto s = load_fixture("sec5a_replay").scenario;
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_scenario(s, {a, true});
  run_scenario(s, {b, true});
  for (const char* f : {"states.csv", "events.csv", "controls.csv", "summary.txt", "states.svg", "errors.svg"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(RunScenario, ReplaySummary) {
  const auto dir = scratch("summary");
  const auto doc = load_fixture("sec5a_replay");
  const auto res = run_scenario(doc.scenario, {dir, false});
  EXPECT_EQ(res.files.size(), 4u);
  const auto text = slurp(dir / "summary.txt");
  EXPECT_NE(text.find("agent 4: NON_TRIGGERING"), std::string::npos) << text;
  EXPECT_NE(text.find("cluster {1,2,3}"), std::string::npos);
  EXPECT_NE(text.find("cluster {5,6,7,8}"), std::string::npos);
  EXPECT_NE(text.find("theta="), std::string::npos);
  EXPECT_NE(text.find("bounds=("), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "states.svg"));
}

TEST(RunScenario, BaselineSummaryIsNominal) {
  auto s = load_fixture("sec5b_actuator").scenario;
  s.attacks.clear();
  const auto text = render_summary(s, simulate(s));
  for (int i = 1; i <= 4; ++i) EXPECT_NE(text.find("agent " + std::to_string(i) + ": NOMINAL"), std::string::npos);
  EXPECT_NE(text.find("converged: yes"), std::string::npos) << text;
  EXPECT_NE(text.find("[attacks]\nnone"), std::string::npos);
}

TEST(RunScenario, PlotsAreStandaloneSvg) {
  const auto dir = scratch("plots");
  run_scenario(load_fixture("sec5b_actuator").scenario, {dir, true});
  for (const char* f : {"states.svg", "errors.svg"}) {
    const auto svg = slurp(dir / f);
    EXPECT_EQ(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0), 0u) << f;
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
  }
  EXPECT_NE(slurp(dir / "errors.svg").find("squared measurement error"), std::string::npos);
}

TEST(RunScenario, UnwritableDirectoryIsIoError) {
  const auto dir = scratch("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  auto s = load_fixture("sec5b_actuator").scenario;
  s.horizon = 0.01;
  EXPECT_THROW(run_scenario(s, {dir / "file" / "sub", false}), IoError);
}

TEST(ReportingPartition, SplitsAtArmedReplays) {
  const auto doc = load_fixture("sec5a_replay");
  const auto tr = simulate(doc.scenario);
  const auto blocks = reporting_partition(doc.scenario, tr);
  EXPECT_EQ(blocks, (std::vector<AgentSet>{{1, 2, 3}, {5, 6, 7, 8}, {4}}));

  auto plain = doc.scenario;
  plain.attacks.clear();
  plain.horizon = 0.1;
  EXPECT_EQ(reporting_partition(plain, simulate(plain)).size(), 1u);
}
