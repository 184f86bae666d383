// etmas: run event-triggered consensus scenarios under attack.
//
//   etmas run <scenario.yaml | fixture> [--out DIR] [--seed N] [--dt X] [--horizon T] [--plots] [--no-attacks]
//   etmas fixtures [--export DIR]
//   etmas batch <dir> [--out DIR] [--threads N] [--plots]
//
// Output directories default to $ETMAS_OUT_DIR/<outputs.directory or out/<name>>
// ($ETMAS_OUT_DIR defaults to the working directory).
// Exit status: 0 success (flagged or diverged runs included), 1 usage or
// scenario error, 2 I/O error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "etmas/batch.hpp"
#include "etmas/fixtures.hpp"
#include "etmas/report.hpp"
#include "etmas/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace etmas;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

fs::path output_root() {
  const char* env = std::getenv("ETMAS_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path default_out_dir(const ScenarioDocument& doc, const std::string& fallback_name) {
  if (doc.outputs.directory) return output_root() / *doc.outputs.directory;
  return output_root() / "out" / fallback_name;
}

ScenarioDocument load(const std::string& ref) {
  std::error_code ec;
  if (fs::is_regular_file(ref, ec)) return parse_scenario(ref);
  if (find_fixture(ref)) return load_fixture(ref);
  throw IoError(ref + ": no such scenario file or bundled fixture");
}

void revalidate(const Scenario& s) {
  try {
    s.validate();
  } catch (const ScenarioError& e) {
    throw ScenarioParseError(std::string("override: ") + e.what());
  }
}

struct RunArgs {
  std::string scenario;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  bool plots = false;
  bool no_attacks = false;
};

int cmd_run(const RunArgs& a) {
  auto doc = load(a.scenario);
  Scenario& s = doc.scenario;
  if (a.seed) s.seed = *a.seed;
  if (a.dt) s.dt = *a.dt;
  if (a.horizon) s.horizon = *a.horizon;
  if (a.no_attacks) s.attacks.clear();
  revalidate(s);

  const std::string name = s.name.empty() ? fs::path(a.scenario).stem().string() : s.name;
  RunOptions opts{a.out ? fs::path(*a.out) : default_out_dir(doc, name), a.plots || doc.outputs.plots};
  const auto res = run_scenario(s, opts);

  std::cout << render_summary(s, res.trace) << '\n';
  for (const auto& f : res.files) std::cout << "wrote " << f.string() << '\n';
  return kExitOk;
}

int cmd_fixtures(const std::optional<std::string>& export_dir) {
  for (const auto& f : list_fixtures()) std::cout << f.name << "\t" << f.description << '\n';
  if (!export_dir) return kExitOk;

  std::error_code ec;
  fs::create_directories(*export_dir, ec);
  if (ec) throw IoError(*export_dir + ": cannot create directory");
  for (const auto& f : bundled_fixtures()) {
    const auto path = fs::path(*export_dir) / (std::string(f.name) + ".yaml");
    std::ofstream out(path, std::ios::binary);
    out << f.yaml;
    if (!out) throw IoError(path.string() + ": write failed");
    std::cout << "wrote " << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_batch(const std::string& dir, const std::optional<std::string>& out, int threads, bool plots) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError(dir + ": not a directory");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".yaml" || ext == ".yml")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "etmas: " << dir << ": no scenario files\n";
    return kExitUsage;
  }

  // Parse everything first so a bad file aborts before any run.
  std::vector<ScenarioDocument> docs;
  std::vector<Scenario> scenarios;
  for (const auto& f : files) {
    docs.push_back(parse_scenario(f));
    scenarios.push_back(docs.back().scenario);
  }

  // One subdirectory per file stem keeps the outputs disjoint.
  const fs::path root = out ? fs::path(*out) : output_root() / "out" / "batch";
  const auto traces = run_batch_parallel(scenarios, threads);
  for (std::size_t k = 0; k < files.size(); ++k) {
    const RunOptions opts{root / files[k].stem(), plots || docs[k].outputs.plots};
    write_outputs(scenarios[k], traces[k], opts);
    const auto& tr = traces[k];
    std::size_t flagged = 0;
    for (auto f : tr.flags) flagged += f != kNominal;
    std::cout << files[k].filename().string() << ": " << tr.rows() << " rows, " << flagged << " flagged agents"
              << (tr.diverged ? ", diverged" : "") << " -> " << opts.out_dir.string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-triggered multi-agent consensus under deception attacks"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario file or bundled fixture");
  run_cmd->add_option("scenario", run.scenario, "Scenario YAML path or fixture name")->required();
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--seed", run.seed, "Random seed override");
  run_cmd->add_option("--dt", run.dt, "Step size override");
  run_cmd->add_option("--horizon", run.horizon, "Horizon override");
  run_cmd->add_flag("--plots", run.plots, "Write SVG plots");
  run_cmd->add_flag("--no-attacks", run.no_attacks, "Drop every attack (nominal baseline)");

  std::optional<std::string> export_dir;
  auto* fix_cmd = app.add_subcommand("fixtures", "List bundled fixtures");
  fix_cmd->add_option("--export", export_dir, "Also write the fixture files into DIR");

  std::string batch_dir;
  std::optional<std::string> batch_out;
  int threads = 0;
  bool batch_plots = false;
  auto* batch_cmd = app.add_subcommand("batch", "Run every scenario in a directory in parallel");
  batch_cmd->add_option("dir", batch_dir, "Directory of scenario YAML files")->required();
  batch_cmd->add_option("--out", batch_out, "Root directory for per-scenario outputs");
  batch_cmd->add_option("--threads", threads, "Worker threads (0: OpenMP default)");
  batch_cmd->add_flag("--plots", batch_plots, "Write SVG plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*fix_cmd) return cmd_fixtures(export_dir);
    if (*batch_cmd) return cmd_batch(batch_dir, batch_out, threads, batch_plots);
  } catch (const IoError& e) {
    std::cerr << "etmas: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "etmas: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "etmas: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
