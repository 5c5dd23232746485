#pragma once

// Circuit engine: wires memristor sites into series branches across a fixed
// supply and advances them with explicit Euler on the charge. Steps are split
// at clamp crossings, so depletion times are interpolated exactly under the
// step's constant currents and topology changes take effect at the crossing.

#include "memforage/memristor.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace memforage {

/// Site indices wired in series; each branch spans the whole supply.
using Branch = std::vector<std::size_t>;

struct Topology {
  std::vector<Branch> branches;

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Throws std::invalid_argument on an empty topology, an empty branch, an index
/// out of range, or a site wired twice.
void validate(const Topology& topology, std::size_t site_count);

/// Maps the current depletion state of the sites to a wiring.
class TopologyPolicy {
 public:
  virtual ~TopologyPolicy() = default;
  virtual Topology topology(std::span<const MemristorState> sites) const = 0;
};

/// A wiring that never changes.
class StaticTopology final : public TopologyPolicy {
 public:
  explicit StaticTopology(Topology topology) : topology_(std::move(topology)) {}
  Topology topology(std::span<const MemristorState>) const override { return topology_; }

 private:
  Topology topology_;
};

double branch_current(const Branch& branch, std::span<const MemristorState> sites, double supply_v);

/// Per-site voltage drops along one branch, in branch order. They sum to supply_v.
std::vector<double> voltages_across(const Branch& branch, std::span<const MemristorState> sites,
                                    double supply_v);

/// Site-indexed voltages for a whole topology; unwired sites report 0.
std::vector<double> site_voltages(const Topology& topology, std::span<const MemristorState> sites,
                                  double supply_v);

/// Fraction of the total dissipated power taken by `site`. Inside a single
/// branch this is the site's voltage share. Throws std::invalid_argument if the
/// site is not wired.
double allocation_share(std::size_t site, const Topology& topology,
                        std::span<const MemristorState> sites, double supply_v);

struct SimulationState {
  std::vector<MemristorState> sites;
  double supply_v = 5.0;
  double time = 0.0;
  std::int64_t step = 0;
  Topology topology;
  double delivered = 0.0;  ///< charge metered at the supply so far
};

struct DepletionEvent {
  std::size_t site = 0;
  double time = 0.0;
  std::int64_t step = 0;  ///< step during which the clamp happened

  friend bool operator==(const DepletionEvent&, const DepletionEvent&) = default;
};

/// One integration step covering [time, end_time). Electrical quantities are
/// sampled at the start of the step; `delivered` is the running total at its end.
struct TraceRecord {
  std::int64_t step = 0;
  double time = 0.0;
  double end_time = 0.0;
  std::vector<double> q;
  std::vector<double> m;
  std::vector<double> v;
  std::vector<int> branch_of;  ///< branch index per site, -1 when unwired
  std::vector<double> branch_currents;
  double influx = 0.0;
  double step_charge = 0.0;
  double delivered = 0.0;
};

struct StepOutcome {
  SimulationState state;
  TraceRecord record;
  std::vector<DepletionEvent> events;
};

/// Advances the state by `dt`. When `policy` is given the wiring is refreshed
/// after every clamp inside the step. If the step clamps the last undepleted
/// site, it ends at that instant and `state.time` is the depletion time.
///
/// Throws std::invalid_argument for dt <= 0 or an invalid topology.
StepOutcome step(const SimulationState& state, double dt, const TopologyPolicy* policy = nullptr);

enum class RunStatus { Completed, Incomplete };

struct RunOptions {
  double dt = 0.001;
  std::int64_t max_steps = 10'000'000;
  std::int64_t record_every = 1;  ///< thinning; the final step is always kept
  bool keep_records = true;
};

struct SimulationTrace {
  std::vector<std::string> labels;
  std::vector<MemristorParams> params;
  double supply_v = 0.0;
  double dt = 0.0;
  std::vector<TraceRecord> records;
  std::vector<DepletionEvent> events;  ///< in order of occurrence
  RunStatus status = RunStatus::Incomplete;
  std::int64_t steps_taken = 0;
  std::optional<std::int64_t> depletion_step;  ///< D; empty when no step was needed
  double depletion_time = 0.0;                 ///< interpolated; valid when completed
  double total_delivered = 0.0;

  bool completed() const noexcept { return status == RunStatus::Completed; }
  std::size_t site_count() const noexcept { return labels.size(); }
  /// Interpolated clamp time per site, empty for sites that never clamped.
  std::vector<std::optional<double>> site_depletion_times() const;
};

/// Initial state with every site at q = 0, wired by `policy`.
SimulationState make_initial_state(std::vector<MemristorState> sites, double supply_v,
                                   const TopologyPolicy& policy);

/// Runs until every site is clamped or max_steps is exhausted. An exhausted
/// run comes back with status Incomplete and the partial trace.
SimulationTrace run(const SimulationState& initial, const TopologyPolicy& policy,
                    const RunOptions& options);

}  // namespace memforage
