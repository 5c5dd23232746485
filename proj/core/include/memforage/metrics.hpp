#pragma once

// Resource-influx measures over traces and the cross-strategy comparison.
//
// Influx is the total supply current. The cumulative fraction on step n is the
// charge delivered through the end of step n divided by the charge delivered
// at depletion, so every strategy is normalised by its own total and reaches
// exactly 1 on its depletion step.

#include "memforage/circuit.hpp"
#include "memforage/environment.hpp"
#include "memforage/strategy.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace memforage {

/// Supply current sampled at the start of `step`. Throws std::out_of_range
/// if that step was not recorded.
double influx(const SimulationTrace& trace, std::int64_t step);

/// Throws std::logic_error for an incomplete trace (use the raw delivered
/// charge instead) and std::out_of_range for an unrecorded step.
double cumulative_fraction(const SimulationTrace& trace, std::int64_t step);

/// Earliest time at which the cumulative fraction reaches `fraction`,
/// interpolated inside the step. time_to_fraction(trace, 1.0) is the
/// depletion time. Throws std::invalid_argument unless 0 < fraction <= 1.
double time_to_fraction(const SimulationTrace& trace, double fraction);

/// Cumulative fraction at an arbitrary time; 1 after depletion.
double fraction_at_time(const SimulationTrace& trace, double time);

struct Milestone {
  double fraction = 0.0;
  double time = 0.0;
};

struct StrategyRequest {
  StrategyKind kind = StrategyKind::AllSites;
  SequentialMode mode = SequentialMode::ParallelResidual;

  std::string name() const;
  friend bool operator==(const StrategyRequest&, const StrategyRequest&) = default;
};

struct StrategySummary {
  StrategyRequest strategy;
  bool incomplete = true;
  double depletion_time = 0.0;
  std::optional<std::int64_t> depletion_step;
  std::int64_t steps_taken = 0;
  std::vector<std::string> labels;
  std::vector<std::optional<double>> site_depletion_times;
  std::vector<Milestone> milestones;
  double total_delivered = 0.0;
  double surge_window = 0.0;  ///< absolute time the surge fraction was taken at
  std::optional<double> surge_fraction;
};

struct SummaryOptions {
  std::vector<double> milestone_fractions{0.25, 0.5, 0.75, 0.9, 1.0};
  double surge_window_fraction = 0.1;  ///< of the strategy's own depletion time
};

StrategySummary summarize(const SimulationTrace& trace, const StrategyRequest& strategy,
                          const SummaryOptions& options = {});

enum class Verdict { Agree, Disagree, Unavailable };

std::string_view to_string(Verdict verdict) noexcept;

/// One published qualitative ordering, checked against this run.
/// `faster` is expected to have the smaller value of `quantity`.
struct Relation {
  std::string claim;
  std::string reported_evidence;
  std::string quantity;  ///< "depletion time" or "time to 50%"
  StrategyRequest faster;
  StrategyRequest slower;
  double faster_value = 0.0;
  double slower_value = 0.0;
  Verdict verdict = Verdict::Unavailable;

  /// "claim: AGREE (...)" or "claim: DISAGREE under implemented semantics (...)".
  std::string line() const;
};

struct CompareOptions {
  std::optional<double> dt;  ///< overrides the environment's dt
  std::optional<std::int64_t> max_steps;
  std::int64_t record_every = 1;
  SummaryOptions summary;
  bool concurrent = true;
};

struct Comparison {
  std::string environment;
  std::vector<StrategySummary> summaries;
  std::vector<Relation> relations;
  std::string note;
};

/// The default line-up: All Sites, both Sequential modes, Leafcutter.
std::vector<StrategyRequest> default_strategies();

/// Runs each strategy (concurrently when allowed), summarises it and checks
/// the published orderings for the named environment ("rich" or "poor"). Other
/// environments get an empty relation list and an explanatory note.
Comparison compare(const Environment& env, std::span<const StrategyRequest> strategies,
                   const CompareOptions& options = {});

/// Same runs, also returning the traces (in request order), for plotting.
Comparison compare(const Environment& env, std::span<const StrategyRequest> strategies,
                   const CompareOptions& options, std::vector<SimulationTrace>& traces);

}  // namespace memforage
