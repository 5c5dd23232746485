#include "memforage/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace memforage {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json to_json(const Environment& env) {
  ordered_json doc;
  doc["name"] = env.name;
  ordered_json sites = ordered_json::array();
  for (const Site& site : env.sites) {
    ordered_json s;
    s["label"] = site.label;
    s["m0"] = site.m0;
    sites.push_back(std::move(s));
  }
  doc["sites"] = std::move(sites);
  doc["r_off"] = env.r_off;
  doc["beta"] = env.beta;
  doc["supply_v"] = env.supply_v;
  doc["dt"] = env.dt;
  doc["max_steps"] = env.max_steps;
  return doc;
}

namespace {

double number_field(const json& obj, const char* key, const std::string& field, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ScenarioError(field, "expected a number");
  return it->get<double>();
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) throw ScenarioError(prefix + it.key(), "unknown field");
  }
}

}  // namespace

Environment environment_from_json(const json& doc) {
  if (!doc.is_object()) throw ScenarioError("<root>", "scenario must be a JSON object");
  reject_unknown(doc, {"name", "sites", "r_off", "beta", "supply_v", "dt", "max_steps"}, "");

  Environment env;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ScenarioError("name", "expected a string");
    env.name = it->get<std::string>();
  }
  env.r_off = number_field(doc, "r_off", "r_off", env.r_off);
  env.beta = number_field(doc, "beta", "beta", env.beta);
  env.supply_v = number_field(doc, "supply_v", "supply_v", env.supply_v);
  env.dt = number_field(doc, "dt", "dt", env.dt);
  if (auto it = doc.find("max_steps"); it != doc.end()) {
    if (!it->is_number_integer()) throw ScenarioError("max_steps", "expected an integer");
    env.max_steps = it->get<std::int64_t>();
  }

  auto sites = doc.find("sites");
  if (sites == doc.end()) throw ScenarioError("sites", "missing");
  if (!sites->is_array()) throw ScenarioError("sites", "expected an array");
  for (std::size_t i = 0; i < sites->size(); ++i) {
    const json& s = (*sites)[i];
    const std::string field = "sites[" + std::to_string(i) + "]";
    if (!s.is_object()) throw ScenarioError(field, "expected an object");
    reject_unknown(s, {"label", "m0"}, field + ".");
    Site site;
    site.label = "site" + std::to_string(i + 1);
    if (auto it = s.find("label"); it != s.end()) {
      if (!it->is_string()) throw ScenarioError(field + ".label", "expected a string");
      site.label = it->get<std::string>();
    }
    auto m0 = s.find("m0");
    if (m0 == s.end()) throw ScenarioError(field + ".m0", "missing");
    if (!m0->is_number()) throw ScenarioError(field + ".m0", "expected a number");
    site.m0 = m0->get<double>();
    env.sites.push_back(std::move(site));
  }
  validate(env);
  return env;
}

Environment load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path, std::string("invalid JSON: ") + e.what());
  }
  return environment_from_json(doc);
}

void save_scenario(const Environment& env, const std::filesystem::path& path) {
  validate(env);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << to_json(env).dump(2) << '\n';
  if (!out) throw IoError(path, "write failed");
}

std::string trace_csv_header(std::span<const std::string> labels) {
  std::string header = "step,time,influx,cum_frac";
  for (const std::string& label : labels) {
    header += fmt::format(",q_{0},M_{0},V_{0}", label);
  }
  return header;
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& out) {
  out << trace_csv_header(trace.labels) << '\n';
  const bool normalised = trace.completed() && trace.total_delivered > 0.0;
  fmt::memory_buffer line;
  for (const TraceRecord& r : trace.records) {
    line.clear();
    fmt::format_to(std::back_inserter(line), "{},{:.9g},{:.9g},", r.step, r.time, r.influx);
    if (normalised) {
      fmt::format_to(std::back_inserter(line), "{:.9f}", r.delivered / trace.total_delivered);
    } else {
      fmt::format_to(std::back_inserter(line), "nan");
    }
    for (std::size_t i = 0; i < r.q.size(); ++i) {
      fmt::format_to(std::back_inserter(line), ",{:.9g},{:.9g},{:.9g}", r.q[i], r.m[i], r.v[i]);
    }
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

void write_trace(const SimulationTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  write_trace_csv(trace, out);
  if (!out) throw IoError(path, "write failed");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_real(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    if (text == "nan") return std::nan("");
    throw std::runtime_error(fmt::format("line {}: bad number '{}'", line_no, text));
  }
}

}  // namespace

TraceTable read_trace_csv(std::istream& in) {
  TraceTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace file");
  const auto header = split(line);
  if (header.size() < 4 || header[0] != "step" || header[1] != "time" || header[2] != "influx" ||
      header[3] != "cum_frac" || (header.size() - 4) % 3 != 0) {
    throw std::runtime_error("not a trace CSV: unexpected header");
  }
  for (std::size_t k = 4; k < header.size(); k += 3) {
    const std::string& q = header[k];
    if (q.rfind("q_", 0) != 0) throw std::runtime_error("not a trace CSV: bad column " + q);
    table.labels.push_back(q.substr(2));
  }
  const std::size_t n = table.labels.size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error(fmt::format("line {}: expected {} fields, got {}", line_no,
                                           header.size(), cells.size()));
    }
    TraceTable::Row row;
    row.step = static_cast<std::int64_t>(parse_real(cells[0], line_no));
    row.time = parse_real(cells[1], line_no);
    row.influx = parse_real(cells[2], line_no);
    row.cum_frac = parse_real(cells[3], line_no);
    for (std::size_t i = 0; i < n; ++i) {
      row.q.push_back(parse_real(cells[4 + 3 * i], line_no));
      row.m.push_back(parse_real(cells[5 + 3 * i], line_no));
      row.v.push_back(parse_real(cells[6 + 3 * i], line_no));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

TraceTable read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open trace file");
  try {
    return read_trace_csv(in);
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(path, e.what());
  }
}

ordered_json to_json(const StrategySummary& s) {
  ordered_json doc;
  doc["strategy"] = std::string(to_string(s.strategy.kind));
  if (s.strategy.kind == StrategyKind::Sequential) {
    doc["sequential_mode"] = std::string(to_string(s.strategy.mode));
  }
  doc["completed"] = !s.incomplete;
  doc["depletion_time"] = s.incomplete ? ordered_json(nullptr) : ordered_json(s.depletion_time);
  doc["depletion_step"] = s.depletion_step ? ordered_json(*s.depletion_step) : ordered_json(nullptr);
  doc["steps_taken"] = s.steps_taken;
  doc["total_delivered"] = s.total_delivered;
  ordered_json sites = ordered_json::array();
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    ordered_json site;
    site["label"] = s.labels[i];
    const auto& t = s.site_depletion_times[i];
    site["depletion_time"] = t ? ordered_json(*t) : ordered_json(nullptr);
    sites.push_back(std::move(site));
  }
  doc["sites"] = std::move(sites);
  ordered_json milestones = ordered_json::array();
  for (const Milestone& m : s.milestones) {
    milestones.push_back(ordered_json{{"fraction", m.fraction}, {"time", m.time}});
  }
  doc["milestones"] = std::move(milestones);
  if (s.surge_fraction) {
    doc["surge"] = ordered_json{{"window", s.surge_window}, {"fraction", *s.surge_fraction}};
  } else {
    doc["surge"] = nullptr;
  }
  return doc;
}

ordered_json to_json(const Relation& r) {
  ordered_json doc;
  doc["claim"] = r.claim;
  doc["reported"] = r.reported_evidence;
  doc["quantity"] = r.quantity;
  doc["faster"] = r.faster.name();
  doc["faster_value"] = r.faster_value;
  doc["slower"] = r.slower.name();
  doc["slower_value"] = r.slower_value;
  doc["verdict"] = std::string(to_string(r.verdict));
  doc["line"] = r.line();
  return doc;
}

ordered_json to_json(const Comparison& c) {
  ordered_json doc;
  doc["environment"] = c.environment;
  doc["note"] = c.note;
  ordered_json summaries = ordered_json::array();
  for (const StrategySummary& s : c.summaries) summaries.push_back(to_json(s));
  doc["summaries"] = std::move(summaries);
  ordered_json relations = ordered_json::array();
  for (const Relation& r : c.relations) relations.push_back(to_json(r));
  doc["relations"] = std::move(relations);
  return doc;
}

void write_summary(const Comparison& comparison, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << to_json(comparison).dump(2) << '\n';
  if (!out) throw IoError(path, "write failed");
}

}  // namespace memforage
