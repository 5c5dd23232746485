#include "memforage/environment.hpp"

#include <cmath>
#include <set>

namespace memforage {

std::vector<MemristorParams> Environment::params() const {
  std::vector<MemristorParams> out;
  out.reserve(sites.size());
  for (const Site& site : sites) {
    out.push_back({site.m0, r_off, beta});
  }
  return out;
}

std::vector<MemristorState> Environment::states() const {
  std::vector<MemristorState> out;
  out.reserve(sites.size());
  for (const Site& site : sites) {
    out.push_back(make_state({site.m0, r_off, beta}, site.label));
  }
  return out;
}

namespace {

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

void validate(const Environment& env) {
  if (!positive_finite(env.r_off)) throw ScenarioError("r_off", "must be positive and finite");
  if (!positive_finite(env.beta)) throw ScenarioError("beta", "must be positive and finite");
  if (!positive_finite(env.supply_v)) throw ScenarioError("supply_v", "must be positive and finite");
  if (!positive_finite(env.dt)) throw ScenarioError("dt", "must be positive and finite");
  if (env.max_steps < 1) throw ScenarioError("max_steps", "must be at least 1");
  if (env.sites.empty()) throw ScenarioError("sites", "at least one site is required");

  std::set<std::string> labels;
  for (std::size_t i = 0; i < env.sites.size(); ++i) {
    const Site& site = env.sites[i];
    const std::string field = "sites[" + std::to_string(i) + "]";
    if (site.label.empty()) throw ScenarioError(field + ".label", "must not be empty");
    if (site.label.find_first_of(",\"\n\r") != std::string::npos) {
      throw ScenarioError(field + ".label", "must not contain commas, quotes or newlines");
    }
    if (!labels.insert(site.label).second) {
      throw ScenarioError(field + ".label", "duplicate label '" + site.label + "'");
    }
    if (!positive_finite(site.m0)) throw ScenarioError(field + ".m0", "must be positive and finite");
    if (site.m0 > env.r_off) {
      throw ScenarioError(field + ".m0", "initial memristance " + std::to_string(site.m0) +
                                             " exceeds r_off " + std::to_string(env.r_off));
    }
  }
}

namespace {

Environment make_preset(std::string name, std::initializer_list<double> m0) {
  Environment env;
  env.name = std::move(name);
  int k = 1;
  for (double m : m0) {
    env.sites.push_back({"site" + std::to_string(k++), m});
  }
  return env;
}

}  // namespace

Environment preset(std::string_view name) {
  if (name == "rich") return make_preset("rich", {1.0, 2.0, 0.5, 15.0, 4.0});
  if (name == "poor") return make_preset("poor", {0.5, 60.0, 70.0, 80.0, 90.0});
  throw ScenarioError("preset", "unknown preset '" + std::string(name) + "' (valid: rich, poor)");
}

std::vector<std::string> preset_names() { return {"rich", "poor"}; }

RunOptions default_run_options(const Environment& env) {
  RunOptions options;
  options.dt = env.dt;
  options.max_steps = env.max_steps;
  return options;
}

SimulationTrace run_strategy(const Environment& env, const StrategySchedule& schedule,
                             const RunOptions& options) {
  validate(env);
  const SimulationState initial = make_initial_state(env.states(), env.supply_v, schedule);
  return run(initial, schedule, options);
}

}  // namespace memforage
