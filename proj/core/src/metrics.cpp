#include "memforage/metrics.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

#include <fmt/format.h>

namespace memforage {

namespace {

const TraceRecord& record_at(const SimulationTrace& trace, std::int64_t step) {
  auto it = std::lower_bound(trace.records.begin(), trace.records.end(), step,
                             [](const TraceRecord& r, std::int64_t s) { return r.step < s; });
  if (it == trace.records.end() || it->step != step) {
    throw std::out_of_range(fmt::format("step {} is not in the trace ({} records)", step,
                                        trace.records.size()));
  }
  return *it;
}

void require_completed(const SimulationTrace& trace) {
  if (!trace.completed()) {
    throw std::logic_error(
        "trace is incomplete: cumulative fraction is undefined, use the raw delivered charge");
  }
  if (trace.records.empty() || !(trace.total_delivered > 0.0)) {
    throw std::logic_error("trace has no recorded delivery to normalise against");
  }
}

struct DeliveryPoint {
  double time;
  double delivered;
};

// Piecewise-linear delivered charge over time, from the recorded steps.
std::vector<DeliveryPoint> delivery_curve(const SimulationTrace& trace) {
  std::vector<DeliveryPoint> points;
  points.reserve(trace.records.size() + 1);
  for (const TraceRecord& r : trace.records) {
    const double start = r.delivered - r.step_charge;
    if (points.empty() || points.back().time < r.time) {
      points.push_back({r.time, start});
    }
    points.push_back({r.end_time, r.delivered});
  }
  return points;
}

}  // namespace

double influx(const SimulationTrace& trace, std::int64_t step) { return record_at(trace, step).influx; }

double cumulative_fraction(const SimulationTrace& trace, std::int64_t step) {
  require_completed(trace);
  return record_at(trace, step).delivered / trace.total_delivered;
}

double time_to_fraction(const SimulationTrace& trace, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument(fmt::format("fraction {} outside (0, 1]", fraction));
  }
  require_completed(trace);
  if (fraction == 1.0) {
    return trace.depletion_time;
  }
  const double target = fraction * trace.total_delivered;
  const auto points = delivery_curve(trace);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].delivered < target) continue;
    if (k == 0) return points[0].time;
    const DeliveryPoint& a = points[k - 1];
    const DeliveryPoint& b = points[k];
    const double span = b.delivered - a.delivered;
    const double w = span > 0.0 ? (target - a.delivered) / span : 1.0;
    return a.time + std::clamp(w, 0.0, 1.0) * (b.time - a.time);
  }
  return trace.depletion_time;
}

double fraction_at_time(const SimulationTrace& trace, double time) {
  require_completed(trace);
  const auto points = delivery_curve(trace);
  if (time <= points.front().time) {
    return points.front().delivered / trace.total_delivered;
  }
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (points[k].time < time) continue;
    const DeliveryPoint& a = points[k - 1];
    const DeliveryPoint& b = points[k];
    const double w = b.time > a.time ? (time - a.time) / (b.time - a.time) : 1.0;
    return (a.delivered + w * (b.delivered - a.delivered)) / trace.total_delivered;
  }
  return 1.0;
}

std::string StrategyRequest::name() const {
  std::string text(to_string(kind));
  if (kind == StrategyKind::Sequential) {
    text += " (";
    text += to_string(mode);
    text += ")";
  }
  return text;
}

StrategySummary summarize(const SimulationTrace& trace, const StrategyRequest& strategy,
                          const SummaryOptions& options) {
  StrategySummary s;
  s.strategy = strategy;
  s.incomplete = !trace.completed();
  s.depletion_time = trace.depletion_time;
  s.depletion_step = trace.depletion_step;
  s.steps_taken = trace.steps_taken;
  s.labels = trace.labels;
  s.site_depletion_times = trace.site_depletion_times();
  s.total_delivered = trace.total_delivered;
  if (!s.incomplete && !trace.records.empty() && trace.total_delivered > 0.0) {
    for (double f : options.milestone_fractions) {
      s.milestones.push_back({f, time_to_fraction(trace, f)});
    }
    s.surge_window = options.surge_window_fraction * trace.depletion_time;
    s.surge_fraction = fraction_at_time(trace, s.surge_window);
  }
  return s;
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Agree:
      return "AGREE";
    case Verdict::Disagree:
      return "DISAGREE";
    case Verdict::Unavailable:
      return "UNAVAILABLE";
  }
  return "UNAVAILABLE";
}

std::string Relation::line() const {
  std::string verdict_text(to_string(verdict));
  if (verdict == Verdict::Disagree) verdict_text += " under implemented semantics";
  if (verdict == Verdict::Unavailable) verdict_text += " (incomplete run)";
  return fmt::format("{}: {} ({} {}: {:.4f} vs {}: {:.4f}; reported: {})", claim, verdict_text, quantity,
                     faster.name(), faster_value, slower.name(), slower_value, reported_evidence);
}

std::vector<StrategyRequest> default_strategies() {
  return {
      {StrategyKind::AllSites, SequentialMode::ParallelResidual},
      {StrategyKind::Sequential, SequentialMode::ParallelResidual},
      {StrategyKind::Sequential, SequentialMode::SharedSeries},
      {StrategyKind::Leafcutter, SequentialMode::ParallelResidual},
  };
}

namespace {

enum class Quantity { Depletion, HalfTime };

struct ReportedClaim {
  std::string_view environment;
  std::string_view claim;
  std::string_view evidence;
  Quantity quantity;
  StrategyRequest faster;
  StrategyRequest slower;
};

constexpr StrategyRequest kAll{StrategyKind::AllSites, SequentialMode::ParallelResidual};
constexpr StrategyRequest kSeqParallel{StrategyKind::Sequential, SequentialMode::ParallelResidual};
constexpr StrategyRequest kSeqShared{StrategyKind::Sequential, SequentialMode::SharedSeries};
constexpr StrategyRequest kLeaf{StrategyKind::Leafcutter, SequentialMode::ParallelResidual};

// Published orderings for the two preset environments, in published step counts.
const std::vector<ReportedClaim>& reported_claims() {
  static const std::vector<ReportedClaim> claims{
      {"rich", "Leafcutter reaches 50% before All Sites", "44 vs 173 steps to 50%", Quantity::HalfTime,
       kLeaf, kAll},
      {"rich", "Sequential (parallel-residual) slower than All Sites (reported)",
       "967 All Sites vs 1274 Sequential steps", Quantity::Depletion, kAll, kSeqParallel},
      {"rich", "Sequential (shared-series) slower than All Sites (reported)",
       "967 All Sites vs 1274 Sequential steps", Quantity::Depletion, kAll, kSeqShared},
      {"rich", "Leafcutter slower than All Sites (reported)", "967 All Sites vs 2978 Leafcutter steps",
       Quantity::Depletion, kAll, kLeaf},
      {"rich", "Sequential (parallel-residual) depletes before Leafcutter",
       "1274 Sequential vs 2978 Leafcutter steps", Quantity::Depletion, kSeqParallel, kLeaf},
      {"rich", "Sequential (shared-series) depletes before Leafcutter",
       "1274 Sequential vs 2978 Leafcutter steps", Quantity::Depletion, kSeqShared, kLeaf},
      {"poor", "Leafcutter depletes before All Sites", "967 Leafcutter vs 2801 All Sites steps",
       Quantity::Depletion, kLeaf, kAll},
      {"poor", "Leafcutter depletes before Sequential (parallel-residual)",
       "967 Leafcutter vs 1321 Sequential steps", Quantity::Depletion, kLeaf, kSeqParallel},
      {"poor", "Leafcutter depletes before Sequential (shared-series)",
       "967 Leafcutter vs 1321 Sequential steps", Quantity::Depletion, kLeaf, kSeqShared},
      {"poor", "Sequential (parallel-residual) depletes before All Sites",
       "1321 Sequential vs 2801 All Sites steps", Quantity::Depletion, kSeqParallel, kAll},
      {"poor", "Sequential (shared-series) depletes before All Sites",
       "1321 Sequential vs 2801 All Sites steps", Quantity::Depletion, kSeqShared, kAll},
  };
  return claims;
}

std::optional<double> measure(const StrategySummary& s, Quantity quantity) {
  if (s.incomplete) return std::nullopt;
  if (quantity == Quantity::Depletion) return s.depletion_time;
  for (const Milestone& m : s.milestones) {
    if (m.fraction == 0.5) return m.time;
  }
  return std::nullopt;
}

Comparison compare_impl(const Environment& env, std::span<const StrategyRequest> strategies,
                        const CompareOptions& options, std::vector<SimulationTrace>* traces) {
  validate(env);
  RunOptions run_options = default_run_options(env);
  if (options.dt) run_options.dt = *options.dt;
  if (options.max_steps) run_options.max_steps = *options.max_steps;
  run_options.record_every = options.record_every;

  const auto params = env.params();
  struct Result {
    StrategySummary summary;
    SimulationTrace trace;
  };
  auto job = [&](const StrategyRequest& request) {
    const StrategySchedule schedule = make_schedule(request.kind, params, request.mode);
    Result result;
    result.trace = run_strategy(env, schedule, run_options);
    result.summary = summarize(result.trace, request, options.summary);
    if (traces == nullptr) result.trace = {};
    return result;
  };

  std::vector<Result> results;
  results.reserve(strategies.size());
  if (options.concurrent && strategies.size() > 1) {
    std::vector<std::future<Result>> futures;
    for (const StrategyRequest& request : strategies) {
      futures.push_back(std::async(std::launch::async, job, request));
    }
    for (auto& f : futures) results.push_back(f.get());
  } else {
    for (const StrategyRequest& request : strategies) results.push_back(job(request));
  }

  Comparison out;
  out.environment = env.name;
  for (Result& r : results) {
    out.summaries.push_back(std::move(r.summary));
    if (traces != nullptr) traces->push_back(std::move(r.trace));
  }

  auto find = [&](const StrategyRequest& request) -> const StrategySummary* {
    for (const StrategySummary& s : out.summaries) {
      if (s.strategy == request) return &s;
    }
    return nullptr;
  };

  bool known = false;
  for (const ReportedClaim& claim : reported_claims()) {
    if (claim.environment != env.name) continue;
    known = true;
    const StrategySummary* faster = find(claim.faster);
    const StrategySummary* slower = find(claim.slower);
    if (faster == nullptr || slower == nullptr) continue;

    Relation rel;
    rel.claim = claim.claim;
    rel.reported_evidence = claim.evidence;
    rel.quantity = claim.quantity == Quantity::Depletion ? "depletion time" : "time to 50%";
    rel.faster = claim.faster;
    rel.slower = claim.slower;
    const auto a = measure(*faster, claim.quantity);
    const auto b = measure(*slower, claim.quantity);
    if (a && b) {
      rel.faster_value = *a;
      rel.slower_value = *b;
      rel.verdict = *a < *b ? Verdict::Agree : Verdict::Disagree;
    }
    out.relations.push_back(std::move(rel));
  }
  if (!known) {
    out.note = fmt::format("environment '{}' has no published orderings to check", env.name);
  }
  return out;
}

}  // namespace

Comparison compare(const Environment& env, std::span<const StrategyRequest> strategies,
                   const CompareOptions& options) {
  return compare_impl(env, strategies, options, nullptr);
}

Comparison compare(const Environment& env, std::span<const StrategyRequest> strategies,
                   const CompareOptions& options, std::vector<SimulationTrace>& traces) {
  traces.clear();
  return compare_impl(env, strategies, options, &traces);
}

}  // namespace memforage
