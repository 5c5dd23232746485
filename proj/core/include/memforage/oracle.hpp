#pragma once

// Closed-form depletion times for the wirings the strategies produce: series
// chains (all members share one charge) and independent singletons.
//
// In a series chain with C clamped members and active members whose r_on sum
// to S, the total memristance is C*r_off + S*(1 + beta*r_off*q), so
// dq/dt = V / (C*r_off + S*(1 + beta*r_off*q)) integrates exactly.

#include "memforage/memristor.hpp"
#include "memforage/strategy.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace memforage {

/// Reduced time for the common charge to go from q_begin to q_end:
/// [(C*r_off + S)(q_end - q_begin) + (S*beta*r_off/2)(q_end^2 - q_begin^2)] / V.
///
/// Throws std::invalid_argument if q_end < q_begin, q_begin < 0, supply_v <= 0,
/// or S == 0 over a non-empty interval.
double series_phase_time(std::size_t clamped_count, double active_r_on_sum, double q_begin,
                         double q_end, double supply_v, double r_off, double beta);

struct Phase {
  std::size_t clamped_count = 0;
  double active_r_on_sum = 0.0;
  double q_begin = 0.0;
  double q_end = 0.0;
  double duration = 0.0;
  double end_time = 0.0;
  std::size_t depleting_site = 0;  ///< input index of the site clamping at q_end
};

struct PhasePlan {
  std::vector<Phase> phases;
  std::vector<double> site_depletion_times;  ///< indexed like the input
  double total_time = 0.0;
};

/// Splits a static series chain at each successive depletion charge (worst
/// site first). `extra_clamped` adds that many already-depleted members at
/// r_off to the chain. All sites must share r_off and beta; equal M(0) gives a
/// zero-length phase.
PhasePlan series_depletion_plan(std::span<const MemristorParams> sites, double supply_v,
                                std::size_t extra_clamped = 0);

struct OraclePhase {
  std::string label;
  double duration = 0.0;
};

struct StrategyOracle {
  double total_time = 0.0;
  std::vector<OraclePhase> phases;
  std::vector<double> site_depletion_times;
};

/// Exact total depletion time of a strategy, composed from singleton and
/// series plans along the strategy's phases.
StrategyOracle strategy_oracle_time(std::span<const MemristorParams> sites, double supply_v,
                                    StrategyKind kind,
                                    SequentialMode mode = SequentialMode::ParallelResidual);

}  // namespace memforage
