#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "memforage/metrics.hpp"
#include "memforage/oracle.hpp"
#include "memforage/scenario.hpp"
#include "memforage/strategy.hpp"
#include "memforage/svg_chart.hpp"

namespace memforage::cli {

namespace {

constexpr double kOracleTolerance = 0.005;  // relative, at the requested dt
constexpr double kHalvingLow = 0.3;
constexpr double kHalvingHigh = 0.7;
constexpr double kScalingTolerance = 1e-6;
constexpr std::int64_t kPlotRecordEvery = 20;

std::vector<StrategyRequest> requested_strategies(const Invocation& inv) {
  const SequentialMode mode = parse_sequential_mode(inv.seq_mode);
  std::vector<StrategyRequest> out;
  for (const std::string& name : inv.strategies) {
    out.push_back({parse_strategy(name), mode});
  }
  return out;
}

RunOptions run_options_for(const Environment& env, const Invocation& inv, std::int64_t record_default) {
  RunOptions options = default_run_options(env);
  options.record_every = inv.record_every.value_or(record_default);
  if (options.record_every < 1) throw std::invalid_argument("--record-every must be at least 1");
  return options;
}

std::string format_time(const std::optional<double>& t) {
  return t ? fmt::format("{:.6f}", *t) : std::string("-");
}

void print_summary(std::ostream& out, const StrategySummary& s) {
  fmt::print(out, "strategy: {}\n", s.strategy.name());
  if (s.incomplete) {
    fmt::print(out, "status: INCOMPLETE after {} steps (delivered charge {:.9g})\n", s.steps_taken,
               s.total_delivered);
  } else {
    fmt::print(out, "status: completed\n");
    fmt::print(out, "depletion time D: {:.6f}\n", s.depletion_time);
    fmt::print(out, "depletion step: {}\n", s.depletion_step ? std::to_string(*s.depletion_step) : "-");
    fmt::print(out, "total delivered: {:.9g}\n", s.total_delivered);
  }
  fmt::print(out, "site depletion times:\n");
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    fmt::print(out, "  {:<12} {}\n", s.labels[i], format_time(s.site_depletion_times[i]));
  }
  if (!s.milestones.empty()) {
    fmt::print(out, "milestones:\n");
    for (const Milestone& m : s.milestones) {
      fmt::print(out, "  {:>5.1f}%  t = {:.6f}\n", m.fraction * 100.0, m.time);
    }
  }
  if (s.surge_fraction) {
    fmt::print(out, "surge: {:.4f} of total within t <= {:.6f}\n", *s.surge_fraction, s.surge_window);
  }
}

// Phase durations read off the depletion events, in the schedule's own terms.
void print_phases(std::ostream& out, const StrategySchedule& schedule, const SimulationTrace& trace) {
  const auto times = trace.site_depletion_times();
  switch (schedule.kind()) {
    case StrategyKind::AllSites:
      if (trace.completed()) fmt::print(out, "phase 1 (all sites in series): {:.6f}\n", trace.depletion_time);
      break;
    case StrategyKind::Leafcutter: {
      const auto& best = times[schedule.order().front()];
      if (!best) break;
      fmt::print(out, "phase 1 (best site alone): {:.6f}\n", *best);
      if (trace.completed() && schedule.site_count() > 1) {
        fmt::print(out, "phase 2 (remaining sites in series): {:.6f}\n", trace.depletion_time - *best);
      }
      break;
    }
    case StrategyKind::Sequential: {
      double previous = 0.0;
      int k = 1;
      for (std::size_t site : schedule.order()) {
        if (!times[site]) break;
        fmt::print(out, "phase {} ({} alone): {:.6f}\n", k++, trace.labels[site], *times[site] - previous);
        previous = *times[site];
      }
      break;
    }
  }
}

ChartSeries cumulative_series(const std::string& name, const SimulationTrace& trace) {
  ChartSeries series;
  series.name = name;
  series.x.push_back(0.0);
  series.y.push_back(0.0);
  for (const TraceRecord& r : trace.records) {
    series.x.push_back(r.end_time);
    series.y.push_back(r.delivered / trace.total_delivered);
  }
  return series;
}

std::vector<ChartSeries> voltage_series(const SimulationTrace& trace) {
  std::vector<ChartSeries> out(trace.site_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].name = trace.labels[i];
  for (const TraceRecord& r : trace.records) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].x.push_back(r.time);
      out[i].y.push_back(r.v[i]);
    }
  }
  return out;
}

ChartSpec voltage_spec(const std::string& title) {
  ChartSpec spec;
  spec.title = title;
  spec.x_label = "time (reduced units)";
  spec.y_label = "voltage across site";
  spec.y_min = 0.0;
  return spec;
}

ChartSpec cumulative_spec(const std::string& title) {
  ChartSpec spec;
  spec.title = title;
  spec.x_label = "time (reduced units)";
  spec.y_label = "fraction of gathered resource";
  spec.y_min = 0.0;
  spec.y_max = 1.0;
  return spec;
}

}  // namespace

Environment resolve_environment(const Invocation& inv) {
  if (inv.preset && inv.scenario) {
    throw std::invalid_argument("give either --preset or --scenario, not both");
  }
  if (!inv.preset && !inv.scenario) {
    throw std::invalid_argument("a scenario source is required: --preset <name> or --scenario <path>");
  }
  Environment env = inv.preset ? preset(*inv.preset) : load_scenario(*inv.scenario);
  if (inv.dt) env.dt = *inv.dt;
  if (inv.max_steps) env.max_steps = *inv.max_steps;
  validate(env);
  return env;
}

int run_command(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (inv.strategies.size() != 1) {
    fmt::print(err, "run: exactly one --strategy is required\n");
    return kUsage;
  }
  const Environment env = resolve_environment(inv);
  const StrategyRequest request = requested_strategies(inv).front();
  const auto params = env.params();
  const StrategySchedule schedule = make_schedule(request.kind, params, request.mode);
  const SimulationTrace trace = run_strategy(env, schedule, run_options_for(env, inv, 1));
  const StrategySummary summary = summarize(trace, request);

  fmt::print(out, "environment: {}\n", env.name.empty() ? "(unnamed)" : env.name);
  fmt::print(out, "dt: {}\n", env.dt);
  print_summary(out, summary);
  print_phases(out, schedule, trace);

  if (inv.out) write_trace(trace, *inv.out);
  if (inv.summary) {
    Comparison doc;
    doc.environment = env.name;
    doc.summaries.push_back(summary);
    write_summary(doc, *inv.summary);
  }
  if (inv.svg && !trace.records.empty()) {
    const auto series = voltage_series(trace);
    write_line_chart(*inv.svg, voltage_spec("Voltage per site: " + request.name()), series);
  }
  return trace.completed() ? kOk : kIncomplete;
}

int compare_command(const Invocation& inv, std::ostream& out, std::ostream& err) {
  (void)err;
  const Environment env = resolve_environment(inv);
  std::vector<StrategyRequest> strategies = default_strategies();
  if (!inv.strategies.empty()) {
    strategies.clear();
    for (const std::string& name : inv.strategies) {
      strategies.push_back({parse_strategy(name), parse_sequential_mode(inv.seq_mode)});
    }
  }
  CompareOptions options;
  options.record_every = inv.record_every.value_or(inv.svg ? kPlotRecordEvery : 1);
  std::vector<SimulationTrace> traces;
  const Comparison comparison = compare(env, strategies, options, traces);

  fmt::print(out, "environment: {}\n", env.name.empty() ? "(unnamed)" : env.name);
  fmt::print(out, "{:<32} {:>12} {:>12} {:>12} {:>10}\n", "strategy", "D", "t(50%)", "t(90%)", "status");
  bool all_completed = true;
  for (const StrategySummary& s : comparison.summaries) {
    auto milestone = [&](double f) -> std::optional<double> {
      for (const Milestone& m : s.milestones) {
        if (m.fraction == f) return m.time;
      }
      return std::nullopt;
    };
    all_completed = all_completed && !s.incomplete;
    fmt::print(out, "{:<32} {:>12} {:>12} {:>12} {:>10}\n", s.strategy.name(),
               s.incomplete ? std::string("-") : fmt::format("{:.4f}", s.depletion_time),
               format_time(milestone(0.5)), format_time(milestone(0.9)),
               s.incomplete ? "INCOMPLETE" : "ok");
  }
  fmt::print(out, "relations:\n");
  for (const Relation& r : comparison.relations) {
    fmt::print(out, "  {}\n", r.line());
  }
  if (!comparison.note.empty()) fmt::print(out, "  note: {}\n", comparison.note);

  if (inv.summary) write_summary(comparison, *inv.summary);
  if (inv.svg) {
    std::vector<ChartSeries> series;
    for (std::size_t k = 0; k < traces.size(); ++k) {
      if (traces[k].completed() && !traces[k].records.empty()) {
        series.push_back(cumulative_series(comparison.summaries[k].strategy.name(), traces[k]));
      }
    }
    if (!series.empty()) {
      write_line_chart(*inv.svg, cumulative_spec("Cumulative gathered resource: " + env.name), series);
    }
  }
  return all_completed ? kOk : kIncomplete;
}

namespace {

struct ValidationCase {
  std::string environment;
  StrategyRequest strategy;
  double oracle = 0.0;
  double coarse = 0.0;
  double fine = 0.0;
  double scaled = 0.0;
  double coarse_error = 0.0;
  double fine_error = 0.0;
  double ratio = 0.0;
  double scaling_error = 0.0;
  bool pass = false;
  std::string reason;
};

ValidationCase validate_case(const Environment& env, const StrategyRequest& request) {
  ValidationCase vc;
  vc.environment = env.name.empty() ? "(unnamed)" : env.name;
  vc.strategy = request;
  const auto params = env.params();
  vc.oracle = strategy_oracle_time(params, env.supply_v, request.kind, request.mode).total_time;
  const StrategySchedule schedule = make_schedule(request.kind, params, request.mode);

  RunOptions options = default_run_options(env);
  options.keep_records = false;
  const SimulationTrace coarse = run_strategy(env, schedule, options);
  options.dt = env.dt / 2.0;
  const SimulationTrace fine = run_strategy(env, schedule, options);
  Environment doubled = env;
  doubled.supply_v = env.supply_v * 2.0;
  const SimulationTrace scaled = run_strategy(doubled, schedule, options);

  if (!coarse.completed() || !fine.completed() || !scaled.completed()) {
    vc.reason = "incomplete run";
    return vc;
  }
  vc.coarse = coarse.depletion_time;
  vc.fine = fine.depletion_time;
  vc.scaled = scaled.depletion_time;
  const double scale = std::max(std::abs(vc.oracle), 1e-300);
  vc.coarse_error = std::abs(vc.coarse - vc.oracle) / scale;
  vc.fine_error = std::abs(vc.fine - vc.oracle) / scale;
  const bool exact = vc.coarse_error < 1e-12;
  vc.ratio = exact ? 0.0 : vc.fine_error / vc.coarse_error;
  const double half = vc.coarse / 2.0;
  vc.scaling_error = half > 0.0 ? std::abs(vc.scaled - half) / half : std::abs(vc.scaled);

  std::vector<std::string> problems;
  if (vc.coarse_error > kOracleTolerance) problems.push_back("oracle error above 0.5%");
  if (!exact && !(vc.ratio >= kHalvingLow && vc.ratio <= kHalvingHigh)) {
    problems.push_back("halving ratio outside [0.3, 0.7]");
  }
  if (vc.scaling_error > kScalingTolerance) problems.push_back("supply scaling off by more than 1e-6");
  vc.pass = problems.empty();
  for (std::size_t k = 0; k < problems.size(); ++k) {
    vc.reason += (k ? "; " : "") + problems[k];
  }
  return vc;
}

}  // namespace

int validate_command(const Invocation& inv, std::ostream& out, std::ostream& err) {
  (void)err;
  std::vector<Environment> envs;
  if (inv.preset || inv.scenario) {
    envs.push_back(resolve_environment(inv));
  } else {
    for (const std::string& name : preset_names()) {
      Invocation per = inv;
      per.preset = name;
      envs.push_back(resolve_environment(per));
    }
  }

  std::vector<std::future<ValidationCase>> jobs;
  for (const Environment& env : envs) {
    for (const StrategyRequest& request : default_strategies()) {
      jobs.push_back(std::async(std::launch::async, validate_case, std::cref(env), request));
    }
  }

  fmt::print(out, "{:<8} {:<32} {:>12} {:>12} {:>10} {:>12} {:>7} {:>10}  {}\n", "env", "strategy",
             "oracle", "t(dt)", "rel.err", "t(dt/2)", "ratio", "scale.err", "result");
  bool all_pass = true;
  for (auto& job : jobs) {
    const ValidationCase vc = job.get();
    all_pass = all_pass && vc.pass;
    fmt::print(out, "{:<8} {:<32} {:>12.6f} {:>12.6f} {:>10.2e} {:>12.6f} {:>7.3f} {:>10.2e}  {}{}\n",
               vc.environment, vc.strategy.name(), vc.oracle, vc.coarse, vc.coarse_error, vc.fine,
               vc.ratio, vc.scaling_error, vc.pass ? "PASS" : "FAIL",
               vc.reason.empty() ? "" : " (" + vc.reason + ")");
  }
  fmt::print(out, "{}\n", all_pass ? "validation: PASS" : "validation: FAIL");
  return all_pass ? kOk : kValidationFailed;
}

int plot_command(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (!inv.svg) {
    fmt::print(err, "plot: --svg <path> is required\n");
    return kUsage;
  }
  if (inv.plot_kind != "voltage" && inv.plot_kind != "cumulative") {
    fmt::print(err, "plot: --kind must be voltage or cumulative\n");
    return kUsage;
  }

  if (!inv.traces.empty()) {
    std::vector<ChartSeries> series;
    for (const auto& path : inv.traces) {
      const TraceTable table = read_trace(path);
      if (inv.plot_kind == "voltage") {
        for (std::size_t i = 0; i < table.labels.size(); ++i) {
          ChartSeries s;
          s.name = inv.traces.size() > 1 ? path.stem().string() + ":" + table.labels[i] : table.labels[i];
          for (const auto& row : table.rows) {
            s.x.push_back(row.time);
            s.y.push_back(row.v[i]);
          }
          series.push_back(std::move(s));
        }
      } else {
        ChartSeries s;
        s.name = path.stem().string();
        for (const auto& row : table.rows) {
          if (std::isnan(row.cum_frac)) {
            throw std::runtime_error(path.string() + ": trace is from an incomplete run");
          }
          s.x.push_back(row.time);
          s.y.push_back(row.cum_frac);
        }
        series.push_back(std::move(s));
      }
    }
    const ChartSpec spec = inv.plot_kind == "voltage" ? voltage_spec("Voltage per site")
                                                      : cumulative_spec("Cumulative gathered resource");
    write_line_chart(*inv.svg, spec, series);
    fmt::print(out, "wrote {}\n", inv.svg->string());
    return kOk;
  }

  const Environment env = resolve_environment(inv);
  const auto params = env.params();
  if (inv.plot_kind == "voltage") {
    const StrategyRequest request =
        inv.strategies.empty() ? StrategyRequest{} : requested_strategies(inv).front();
    const StrategySchedule schedule = make_schedule(request.kind, params, request.mode);
    const SimulationTrace trace = run_strategy(env, schedule, run_options_for(env, inv, kPlotRecordEvery));
    if (trace.records.empty()) {
      fmt::print(err, "plot: run produced no trace records\n");
      return kIncomplete;
    }
    write_line_chart(*inv.svg, voltage_spec("Voltage per site: " + request.name() + " / " + env.name),
                     voltage_series(trace));
    fmt::print(out, "wrote {}\n", inv.svg->string());
    return trace.completed() ? kOk : kIncomplete;
  }

  std::vector<StrategyRequest> strategies =
      inv.strategies.empty() ? default_strategies() : requested_strategies(inv);
  CompareOptions options;
  options.record_every = inv.record_every.value_or(kPlotRecordEvery);
  std::vector<SimulationTrace> traces;
  const Comparison comparison = compare(env, strategies, options, traces);
  std::vector<ChartSeries> series;
  bool all_completed = true;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    if (!traces[k].completed()) {
      all_completed = false;
      continue;
    }
    series.push_back(cumulative_series(comparison.summaries[k].strategy.name(), traces[k]));
  }
  if (series.empty()) {
    fmt::print(err, "plot: no strategy completed\n");
    return kIncomplete;
  }
  write_line_chart(*inv.svg, cumulative_spec("Cumulative gathered resource: " + env.name), series);
  fmt::print(out, "wrote {}\n", inv.svg->string());
  return all_completed ? kOk : kIncomplete;
}

int presets_command(const Invocation&, std::ostream& out, std::ostream&) {
  for (const std::string& name : preset_names()) {
    fmt::print(out, "{}\n", to_json(preset(name)).dump(2));
  }
  return kOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"memforage: memristor models of gatherer allocation"};
  app.require_subcommand(1);

  Invocation inv;
  std::string preset_name;
  std::string scenario_path;
  std::string out_path, summary_path, svg_path;
  double dt = 0.0;
  std::int64_t max_steps = 0;
  std::int64_t record_every = 0;
  std::vector<std::string> trace_paths;

  auto add_source = [&](CLI::App* sub) {
    auto* p = sub->add_option("--preset", preset_name, "Built-in environment (rich, poor)");
    auto* s = sub->add_option("--scenario", scenario_path, "Scenario JSON file");
    p->excludes(s);
    s->excludes(p);
    sub->add_option("--dt", dt, "Step size override")->check(CLI::PositiveNumber);
    sub->add_option("--max-steps", max_steps, "Step cap override")->check(CLI::PositiveNumber);
  };
  auto add_strategy = [&](CLI::App* sub) {
    sub->add_option("--strategy", inv.strategies, "all-sites | sequential | leafcutter")
        ->check(CLI::IsMember({"all-sites", "sequential", "leafcutter"}));
    sub->add_option("--seq-mode", inv.seq_mode, "Sequential residual wiring")
        ->check(CLI::IsMember({"parallel-residual", "shared-series"}));
  };

  CLI::App* run_sub = app.add_subcommand("run", "Simulate one strategy");
  add_source(run_sub);
  add_strategy(run_sub);
  run_sub->add_option("--record-every", record_every, "Keep every k-th step in the trace")
      ->check(CLI::PositiveNumber);
  run_sub->add_option("--out", out_path, "Trace CSV output");
  run_sub->add_option("--summary", summary_path, "Summary JSON output");
  run_sub->add_option("--svg", svg_path, "Per-site voltage chart output");

  CLI::App* compare_sub = app.add_subcommand("compare", "Compare strategies on one environment");
  add_source(compare_sub);
  add_strategy(compare_sub);
  compare_sub->add_option("--record-every", record_every, "Trace thinning for the chart")
      ->check(CLI::PositiveNumber);
  compare_sub->add_option("--summary", summary_path, "Summary JSON output");
  compare_sub->add_option("--svg", svg_path, "Cumulative-fraction chart output");

  CLI::App* validate_sub = app.add_subcommand("validate", "Check the engine against the closed-form oracle");
  add_source(validate_sub);

  CLI::App* plot_sub = app.add_subcommand("plot", "Emit SVG charts");
  add_source(plot_sub);
  add_strategy(plot_sub);
  plot_sub->add_option("--kind", inv.plot_kind, "voltage | cumulative")
      ->check(CLI::IsMember({"voltage", "cumulative"}));
  plot_sub->add_option("--trace", trace_paths, "Plot existing trace CSV file(s)");
  plot_sub->add_option("--record-every", record_every, "Trace thinning")->check(CLI::PositiveNumber);
  plot_sub->add_option("--svg", svg_path, "SVG output")->required();

  CLI::App* presets_sub = app.add_subcommand("presets", "Print the built-in environments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (!preset_name.empty()) inv.preset = preset_name;
  if (!scenario_path.empty()) inv.scenario = scenario_path;
  if (dt > 0.0) inv.dt = dt;
  if (max_steps > 0) inv.max_steps = max_steps;
  if (record_every > 0) inv.record_every = record_every;
  if (!out_path.empty()) inv.out = out_path;
  if (!summary_path.empty()) inv.summary = summary_path;
  if (!svg_path.empty()) inv.svg = svg_path;
  for (const auto& p : trace_paths) inv.traces.emplace_back(p);

  try {
    if (run_sub->parsed()) {
      inv.subcommand = "run";
      return run_command(inv, out, err);
    }
    if (compare_sub->parsed()) {
      inv.subcommand = "compare";
      return compare_command(inv, out, err);
    }
    if (validate_sub->parsed()) {
      inv.subcommand = "validate";
      return validate_command(inv, out, err);
    }
    if (plot_sub->parsed()) {
      inv.subcommand = "plot";
      return plot_command(inv, out, err);
    }
    if (presets_sub->parsed()) {
      inv.subcommand = "presets";
      return presets_command(inv, out, err);
    }
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  }
  return kUsage;
}

}  // namespace memforage::cli
