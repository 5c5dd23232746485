#pragma once

// Scenario files (JSON), trace files (CSV) and summary documents (JSON).
//
// Scenario schema, one object:
//   {
//     "name": "rich",                      optional, default ""
//     "sites": [{"label": "site1", "m0": 1.0}, ...],   required; label optional
//     "r_off": 100, "beta": 1, "supply_v": 5,          optional
//     "dt": 0.001, "max_steps": 10000000               optional
//   }
//
// Trace CSV (wide form, one row per recorded step):
//   step,time,influx,cum_frac,q_<label>,M_<label>,V_<label>,...
// Reals are written with 9 significant digits; cum_frac with 9 decimals, or
// "nan" when the run did not complete. Unwired sites report V = 0.

#include "memforage/circuit.hpp"
#include "memforage/environment.hpp"
#include "memforage/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace memforage {

/// File-level failure; the message carries the path.
class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what)
      : std::runtime_error(path.string() + ": " + what), path_(path) {}
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

nlohmann::ordered_json to_json(const Environment& env);

/// Throws ScenarioError naming the offending field.
Environment environment_from_json(const nlohmann::json& doc);

/// Throws IoError when unreadable or unparsable, ScenarioError when invalid.
Environment load_scenario(const std::filesystem::path& path);
void save_scenario(const Environment& env, const std::filesystem::path& path);

std::string trace_csv_header(std::span<const std::string> labels);
void write_trace_csv(const SimulationTrace& trace, std::ostream& out);
void write_trace(const SimulationTrace& trace, const std::filesystem::path& path);

/// A trace CSV read back from disk.
struct TraceTable {
  std::vector<std::string> labels;
  struct Row {
    std::int64_t step = 0;
    double time = 0.0;
    double influx = 0.0;
    double cum_frac = 0.0;
    std::vector<double> q;
    std::vector<double> m;
    std::vector<double> v;
  };
  std::vector<Row> rows;
};

TraceTable read_trace_csv(std::istream& in);
TraceTable read_trace(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const StrategySummary& summary);
nlohmann::ordered_json to_json(const Relation& relation);
nlohmann::ordered_json to_json(const Comparison& comparison);

/// Writes {"environment", "note", "summaries": [...], "relations": [...]}.
void write_summary(const Comparison& comparison, const std::filesystem::path& path);

}  // namespace memforage
