#pragma once

// Gathering strategies expressed as wiring schedules. A schedule is a pure
// function of which sites are depleted, so it can be shared by reference with
// the engine and queried at any clamp event.

#include "memforage/circuit.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace memforage {

enum class StrategyKind { AllSites, Sequential, Leafcutter };

/// How Sequential wires sites that are already depleted.
enum class SequentialMode {
  ParallelResidual,  ///< each depleted site alone across the supply
  SharedSeries,      ///< depleted sites stay in series with the active one
};

std::string_view to_string(StrategyKind kind) noexcept;
std::string_view to_string(SequentialMode mode) noexcept;

/// Accepts the CLI spellings "all-sites", "sequential", "leafcutter".
/// Throws std::invalid_argument otherwise.
StrategyKind parse_strategy(std::string_view text);
/// Accepts "parallel-residual" and "shared-series".
SequentialMode parse_sequential_mode(std::string_view text);

/// Site indices sorted by ascending M(0) (richest first), ties by index.
std::vector<std::size_t> richness_order(std::span<const MemristorParams> sites);

class StrategySchedule final : public TopologyPolicy {
 public:
  StrategyKind kind() const noexcept { return kind_; }
  SequentialMode mode() const noexcept { return mode_; }
  std::size_t site_count() const noexcept { return order_.size(); }
  /// Richness order; Sequential visits sites in exactly this order and
  /// Leafcutter isolates order().front().
  const std::vector<std::size_t>& order() const noexcept { return order_; }

  Topology topology(std::span<const MemristorState> sites) const override;

  /// 1-based phase cursor derived from the depletion state. All Sites is always
  /// phase 1; Leafcutter is 1 until the best site clamps, then 2; Sequential is
  /// the position of the active site in order(), or site_count() + 1 when done.
  int phase(std::span<const MemristorState> sites) const;

  std::string describe() const;

 private:
  StrategySchedule(StrategyKind kind, SequentialMode mode, std::vector<std::size_t> order)
      : kind_(kind), mode_(mode), order_(std::move(order)) {}

  friend StrategySchedule all_sites_schedule(std::span<const MemristorParams>);
  friend StrategySchedule sequential_schedule(std::span<const MemristorParams>, SequentialMode);
  friend StrategySchedule leafcutter_schedule(std::span<const MemristorParams>);

  StrategyKind kind_;
  SequentialMode mode_;
  std::vector<std::size_t> order_;
};

/// One series branch holding every site, for the whole run.
/// Throws std::invalid_argument for an empty environment.
StrategySchedule all_sites_schedule(std::span<const MemristorParams> sites);

StrategySchedule sequential_schedule(std::span<const MemristorParams> sites,
                                     SequentialMode mode = SequentialMode::ParallelResidual);

/// Phase 1 runs the richest site alone; once it clamps, the rest are run as All
/// Sites with the depleted best left across the supply as a residual branch.
StrategySchedule leafcutter_schedule(std::span<const MemristorParams> sites);

StrategySchedule make_schedule(StrategyKind kind, std::span<const MemristorParams> sites,
                               SequentialMode mode = SequentialMode::ParallelResidual);

}  // namespace memforage
