#pragma once

// Scenario description shared by the engine, metrics and file I/O, plus the
// two built-in environments.

#include "memforage/circuit.hpp"
#include "memforage/strategy.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace memforage {

/// Validation failure tied to one scenario field, e.g. "sites[2].m0".
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct Site {
  std::string label;
  double m0 = 1.0;  ///< initial memristance, used as r_on

  friend bool operator==(const Site&, const Site&) = default;
};

struct Environment {
  std::string name;
  std::vector<Site> sites;
  double r_off = 100.0;
  double beta = 1.0;
  double supply_v = 5.0;
  double dt = 0.001;
  std::int64_t max_steps = 10'000'000;

  friend bool operator==(const Environment&, const Environment&) = default;

  std::vector<MemristorParams> params() const;
  std::vector<MemristorState> states() const;
};

/// Throws ScenarioError naming the first offending field.
void validate(const Environment& env);

/// "rich" or "poor". Throws ScenarioError listing the valid names otherwise.
Environment preset(std::string_view name);
std::vector<std::string> preset_names();

/// Run options taken from the environment's dt and max_steps.
RunOptions default_run_options(const Environment& env);

SimulationTrace run_strategy(const Environment& env, const StrategySchedule& schedule,
                             const RunOptions& options);

}  // namespace memforage
