#include "etmas/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "etmas/scenario_io.hpp"

namespace etmas {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

void write_series(const fs::path& path, const std::vector<double>& times, const Eigen::MatrixXd& values,
                  const std::string& prefix, std::size_t n_agents, Eigen::Index dim) {
  auto out = open_out(path);
  out << "time";
  for (std::size_t i = 0; i < n_agents; ++i) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      out << ',' << prefix << i + 1;
      if (dim > 1) out << '_' << c + 1;
    }
  }
  out << '\n';
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << format_double(times[k]);
    for (Eigen::Index c = 0; c < values.cols(); ++c) out << ',' << format_double(values(static_cast<Eigen::Index>(k), c));
    out << '\n';
  }
  finish(out, path);
}

std::string set_string(const AgentSet& s) {
  std::string out = "{";
  for (auto a : s) out += (out.size() > 1 ? "," : "") + std::to_string(a);
  return out + "}";
}

std::string vec_string(const Eigen::VectorXd& v) {
  if (v.size() == 1) return fixed(v(0), 6);
  std::string out = "(";
  for (Eigen::Index k = 0; k < v.size(); ++k) out += (k ? ", " : "") + fixed(v(k), 6);
  return out + ")";
}

}  // namespace

void write_states_csv(const Trace& tr, const fs::path& path) {
  write_series(path, tr.times, tr.states, "x", tr.n_agents, tr.state_dim);
}

void write_controls_csv(const Trace& tr, const fs::path& path) {
  write_series(path, tr.times, tr.controls, "u", tr.n_agents, tr.input_dim);
}

void write_events_csv(const Trace& tr, const fs::path& path) {
  auto out = open_out(path);
  out << "agent,step,time\n";
  for (std::size_t i = 0; i < tr.n_agents; ++i)
    for (auto k : tr.event_steps[i]) out << i + 1 << ',' << k << ',' << format_double(tr.times[k]) << '\n';
  finish(out, path);
}

CsvTable read_series_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  const std::size_t cols = table.header.size() - 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) throw IoError(path.string() + ": malformed number");
      row.push_back(v);
      p = res.ptr;
      if (p < end && *p == ',') ++p;
    }
    if (row.size() != cols + 1) throw IoError(path.string() + ": ragged row");
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    table.times.push_back(rows[r][0]);
    for (std::size_t c = 0; c < cols; ++c)
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c + 1];
  }
  return table;
}

std::vector<AgentSet> reporting_partition(const Scenario& s, const Trace& tr) {
  AgentSet removed;
  for (const auto& entry : tr.attack_log)
    if (entry.replay) removed.insert(entry.spec.agent);
  if (removed.empty() || removed.size() == tr.n_agents) {
    AgentSet all;
    for (std::size_t i = 1; i <= tr.n_agents; ++i) all.insert(i);
    return {all};
  }
  auto blocks = components_after_removal(s.graph, removed);
  for (auto a : removed) blocks.push_back({a});
  return blocks;
}

std::string render_summary(const Scenario& s, const Trace& tr) {
  std::ostringstream out;
  out << "scenario: " << (s.name.empty() ? "(unnamed)" : s.name) << '\n'
      << "mechanism: " << to_string(tr.mechanism) << '\n'
      << "agents: " << tr.n_agents << "  state_dim: " << tr.state_dim << "  input_dim: " << tr.input_dim << '\n'
      << "dt: " << format_double(tr.dt) << "  horizon: " << format_double(tr.horizon) << "  seed: " << s.seed << '\n'
      << "diverged: " << (tr.diverged ? "yes (trace truncated at t=" + format_double(tr.times.back()) + ")" : "no")
      << "\n\n";

  out << "[flags]\n";
  for (std::size_t i = 0; i < tr.n_agents; ++i) out << "agent " << i + 1 << ": " << flag_names(tr.flags[i]) << '\n';

  out << "\n[attacks]\n";
  if (tr.attack_log.empty()) out << "none\n";
  for (const auto& e : tr.attack_log) {
    out << "agent " << e.spec.agent << ' ' << to_string(e.spec.channel) << " onset " << format_double(e.spec.onset);
    if (e.replay) {
      const auto& r = *e.replay;
      out << ": armed at t=" << format_double(r.armed_at) << " theta=" << format_double(r.theta) << " bounds=("
          << format_double(r.bounds.lower) << ", " << format_double(r.bounds.upper) << ")"
          << " q_eavesdropped=" << vec_string(r.q_eavesdropped) << " (event at t=" << format_double(r.sampled_at)
          << ") q_replayed=" << vec_string(r.output);
    } else if (e.spec.channel == AttackChannel::ACTUATOR_CONSTANT) {
      out << ": value " << vec_string(e.spec.value);
    } else if (!e.spec.signal.times.empty()) {
      out << ": signal with " << e.spec.signal.times.size() << " samples";
    }
    if (!e.note.empty()) out << " [" << e.note << "]";
    out << '\n';
  }

  const auto report = cluster_report(tr, reporting_partition(s, tr));
  out << "\n[consensus]\n"
      << "final disagreement: " << fixed(report.final_disagreement, 6) << '\n'
      << "settle time (tol " << format_double(kConsensusTolerance) << "): "
      << (report.settle_time ? format_double(*report.settle_time) : std::string("never")) << '\n'
      << "converged: " << (report.converged ? "yes" : "no") << '\n';
  for (const auto& c : report.clusters) {
    out << "cluster " << set_string(c.members) << ": mean " << vec_string(c.mean) << " disagreement "
        << fixed(c.disagreement, 6) << (c.converged ? " converged" : " not converged") << '\n';
  }
  if (report.clusters.size() > 1) out << "max cluster gap: " << fixed(report.max_cluster_gap(), 6) << '\n';

  std::optional<double> first_onset;
  for (const auto& a : s.attacks) first_onset = std::min(first_onset.value_or(a.onset), a.onset);
  const auto stats = inter_event_stats(tr);
  out << "\n[events]\n";
  for (std::size_t i = 0; i < tr.n_agents; ++i) {
    const auto& st = stats.agents[i];
    out << "agent " << i + 1 << ": count " << st.count;
    if (st.gaps_defined) {
      out << " gap min " << fixed(st.min_gap) << " mean " << fixed(st.mean_gap) << " max " << fixed(st.max_gap);
    } else {
      out << " gaps undefined";
    }
    if (first_onset) out << " after t=" << format_double(*first_onset) << ": " << stats.events_after(tr, i, *first_onset);
    out << " longest run " << longest_trigger_run(tr, i) << '\n';
  }
  return out.str();
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// Series are columns of `values` sampled at `times`.
std::string render_svg(const std::vector<double>& times, const Eigen::MatrixXd& values,
                       const std::vector<std::string>& labels, const std::string& title, const std::string& ylabel) {
  constexpr double W = 860, H = 440, L = 70, R = 130, T = 40, B = 50;
  const double pw = W - L - R;
  const double ph = H - T - B;

  const double t0 = times.empty() ? 0.0 : times.front();
  const double t1 = times.size() < 2 ? t0 + 1.0 : times.back();
  double lo = values.size() ? values.minCoeff() : 0.0;
  double hi = values.size() ? values.maxCoeff() : 1.0;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const auto px = [&](double t) { return L + (t - t0) / (t1 - t0) * pw; };
  const auto py = [&](double v) { return T + (hi - v) / (hi - lo) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << L + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";

  for (int k = 0; k <= 5; ++k) {
    const double t = t0 + (t1 - t0) * k / 5.0;
    const double v = lo + (hi - lo) * k / 5.0;
    svg << "<line x1=\"" << px(t) << "\" y1=\"" << T << "\" x2=\"" << px(t) << "\" y2=\"" << T + ph
        << "\" stroke=\"#e5e5e5\"/>\n"
        << "<text x=\"" << px(t) << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">" << fixed(t, 3)
        << "</text>\n"
        << "<line x1=\"" << L << "\" y1=\"" << py(v) << "\" x2=\"" << L + pw << "\" y2=\"" << py(v)
        << "\" stroke=\"#e5e5e5\"/>\n"
        << "<text x=\"" << L - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << fixed(v, 3) << "</text>\n";
  }
  svg << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">time [s]</text>\n"
      << "<text transform=\"translate(16," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel
      << "</text>\n";

  // At most ~1500 vertices per series.
  const std::size_t stride = std::max<std::size_t>(1, times.size() / 1500);
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    const char* color = kPalette[static_cast<std::size_t>(c) % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t k = 0; k < times.size(); k += stride) {
      svg << fixed(px(times[k]), 6) << ',' << fixed(py(values(static_cast<Eigen::Index>(k), c)), 6) << ' ';
    }
    if (!times.empty()) {
      const auto last = times.size() - 1;
      svg << fixed(px(times[last]), 6) << ',' << fixed(py(values(static_cast<Eigen::Index>(last), c)), 6);
    }
    svg << "\"/>\n";
    const double ly = T + 14 + 16 * static_cast<double>(c);
    svg << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 32 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << L + pw + 38 << "\" y=\"" << ly + 4 << "\">" << labels[static_cast<std::size_t>(c)]
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

}  // namespace

std::string render_state_svg(const Trace& tr, const std::string& title) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < tr.n_agents; ++i)
    for (Eigen::Index c = 0; c < tr.state_dim; ++c)
      labels.push_back("x" + std::to_string(i + 1) + (tr.state_dim > 1 ? "_" + std::to_string(c + 1) : ""));
  return render_svg(tr.times, tr.states, labels, title, "state");
}

std::string render_error_svg(const Trace& tr, const std::string& title) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < tr.n_agents; ++i) labels.push_back("agent " + std::to_string(i + 1));
  const std::string ylabel =
      tr.mechanism == Mechanism::S_ETM ? "squared measurement error e_i^2" : "measurement error |e_i|";
  return render_svg(tr.times, tr.monitor_error, labels, title, ylabel);
}

std::vector<fs::path> write_outputs(const Scenario& s, const Trace& tr, const RunOptions& opts) {
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec || !fs::is_directory(opts.out_dir))
    throw IoError(opts.out_dir.string() + ": cannot create output directory");

  std::vector<fs::path> files;
  const auto emit = [&](const char* name, auto&& writer) {
    const auto path = opts.out_dir / name;
    writer(path);
    files.push_back(path);
  };
  emit("states.csv", [&](const fs::path& p) { write_states_csv(tr, p); });
  emit("events.csv", [&](const fs::path& p) { write_events_csv(tr, p); });
  emit("controls.csv", [&](const fs::path& p) { write_controls_csv(tr, p); });
  emit("summary.txt", [&](const fs::path& p) { write_text(p, render_summary(s, tr)); });
  if (opts.plots) {
    const std::string name = s.name.empty() ? "scenario" : s.name;
    emit("states.svg", [&](const fs::path& p) { write_text(p, render_state_svg(tr, name + ": agent states")); });
    emit("errors.svg", [&](const fs::path& p) { write_text(p, render_error_svg(tr, name + ": trigger measurement error")); });
  }
  return files;
}

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
  RunResult res{simulate(s), {}};
  res.files = write_outputs(s, res.trace, opts);
  return res;
}

}  // namespace etmas
