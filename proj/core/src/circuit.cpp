#include "memforage/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace memforage {

void validate(const Topology& topology, std::size_t site_count) {
  if (topology.branches.empty()) {
    throw std::invalid_argument("topology has no branches");
  }
  std::vector<bool> seen(site_count, false);
  for (const Branch& branch : topology.branches) {
    if (branch.empty()) {
      throw std::invalid_argument("topology contains an empty branch");
    }
    for (std::size_t site : branch) {
      if (site >= site_count) {
        throw std::invalid_argument("topology references site " + std::to_string(site) +
                                    " but only " + std::to_string(site_count) + " exist");
      }
      if (seen[site]) {
        throw std::invalid_argument("site " + std::to_string(site) + " wired into more than one branch");
      }
      seen[site] = true;
    }
  }
}

namespace {

double series_memristance(const Branch& branch, std::span<const MemristorState> sites) {
  double total = 0.0;
  for (std::size_t site : branch) {
    total += memristance(sites[site]);
  }
  return total;
}

bool all_clamped(std::span<const MemristorState> sites) {
  return std::all_of(sites.begin(), sites.end(), [](const MemristorState& s) { return s.clamped; });
}

}  // namespace

double branch_current(const Branch& branch, std::span<const MemristorState> sites, double supply_v) {
  if (branch.empty()) {
    throw std::invalid_argument("branch_current: empty branch");
  }
  return supply_v / series_memristance(branch, sites);
}

std::vector<double> voltages_across(const Branch& branch, std::span<const MemristorState> sites,
                                    double supply_v) {
  const double current = branch_current(branch, sites, supply_v);
  std::vector<double> out;
  out.reserve(branch.size());
  for (std::size_t site : branch) {
    out.push_back(current * memristance(sites[site]));
  }
  return out;
}

std::vector<double> site_voltages(const Topology& topology, std::span<const MemristorState> sites,
                                  double supply_v) {
  std::vector<double> out(sites.size(), 0.0);
  for (const Branch& branch : topology.branches) {
    const auto drops = voltages_across(branch, sites, supply_v);
    for (std::size_t k = 0; k < branch.size(); ++k) {
      out[branch[k]] = drops[k];
    }
  }
  return out;
}

double allocation_share(std::size_t site, const Topology& topology,
                        std::span<const MemristorState> sites, double supply_v) {
  double total = 0.0;
  std::optional<double> mine;
  for (const Branch& branch : topology.branches) {
    const double current = branch_current(branch, sites, supply_v);
    for (std::size_t member : branch) {
      const double power = current * current * memristance(sites[member]);
      total += power;
      if (member == site) {
        mine = power;
      }
    }
  }
  if (!mine) {
    throw std::invalid_argument("allocation_share: site " + std::to_string(site) + " is not wired");
  }
  return total > 0.0 ? *mine / total : 0.0;
}

std::vector<std::optional<double>> SimulationTrace::site_depletion_times() const {
  std::vector<std::optional<double>> out(labels.size());
  for (const DepletionEvent& event : events) {
    if (!out[event.site]) {
      out[event.site] = event.time;
    }
  }
  return out;
}

StepOutcome step(const SimulationState& state, double dt, const TopologyPolicy* policy) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step: dt must be positive");
  }
  validate(state.topology, state.sites.size());

  StepOutcome out;
  out.state = state;
  SimulationState& s = out.state;
  const std::size_t n = s.sites.size();

  TraceRecord& rec = out.record;
  rec.step = state.step;
  rec.time = state.time;
  rec.q.resize(n);
  rec.m.resize(n);
  rec.branch_of.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    rec.q[i] = s.sites[i].q;
    rec.m[i] = memristance(s.sites[i]);
  }
  rec.v = site_voltages(s.topology, s.sites, s.supply_v);
  for (std::size_t b = 0; b < s.topology.branches.size(); ++b) {
    const double current = branch_current(s.topology.branches[b], s.sites, s.supply_v);
    rec.branch_currents.push_back(current);
    rec.influx += current;
    for (std::size_t site : s.topology.branches[b]) {
      rec.branch_of[site] = static_cast<int>(b);
    }
  }

  const bool depleted_at_entry = all_clamped(s.sites);
  const double tiny = dt * 1e-12;
  double elapsed = 0.0;
  double charge = 0.0;
  bool terminal = false;
  double terminal_time = 0.0;

  std::vector<double> currents;
  while (dt - elapsed > tiny) {
    currents.clear();
    for (const Branch& branch : s.topology.branches) {
      currents.push_back(branch_current(branch, s.sites, s.supply_v));
    }

    // Advance to the earliest clamp crossing or the end of the step.
    double h = dt - elapsed;
    for (std::size_t b = 0; b < currents.size(); ++b) {
      if (!(currents[b] > 0.0)) continue;
      for (std::size_t site : s.topology.branches[b]) {
        const MemristorState& m = s.sites[site];
        if (m.clamped) continue;
        const double to_cross = std::max(0.0, (depletion_charge(m.params) - m.q) / currents[b]);
        h = std::min(h, to_cross);
      }
    }

    std::vector<DepletionEvent> fresh;
    for (std::size_t b = 0; b < currents.size(); ++b) {
      const double current = currents[b];
      for (std::size_t site : s.topology.branches[b]) {
        MemristorState& m = s.sites[site];
        const bool was_clamped = m.clamped;
        const double q_star = depletion_charge(m.params);
        double to_cross = std::numeric_limits<double>::infinity();
        if (!was_clamped && current > 0.0) {
          to_cross = std::max(0.0, (q_star - m.q) / current);
        }
        if (h > 0.0) {
          m = accumulate(m, current, h);
        }
        if (!was_clamped && (m.clamped || to_cross <= h)) {
          m.clamped = true;
          m.q = std::max(m.q, q_star);
          fresh.push_back({site, state.time + elapsed + std::min(to_cross, h), state.step});
        }
      }
      charge += current * h;
    }
    elapsed += h;

    if (!fresh.empty()) {
      std::sort(fresh.begin(), fresh.end(), [](const DepletionEvent& a, const DepletionEvent& b) {
        return a.time != b.time ? a.time < b.time : a.site < b.site;
      });
      out.events.insert(out.events.end(), fresh.begin(), fresh.end());
      if (policy != nullptr) {
        s.topology = policy->topology(s.sites);
        validate(s.topology, n);
      }
      if (!depleted_at_entry && all_clamped(s.sites)) {
        terminal = true;
        terminal_time = fresh.back().time;
        break;
      }
    }
  }

  s.step = state.step + 1;
  s.time = terminal ? terminal_time : static_cast<double>(s.step) * dt;
  s.delivered = state.delivered + charge;

  rec.end_time = s.time;
  rec.step_charge = charge;
  rec.delivered = s.delivered;
  return out;
}

SimulationState make_initial_state(std::vector<MemristorState> sites, double supply_v,
                                   const TopologyPolicy& policy) {
  if (sites.empty()) {
    throw std::invalid_argument("simulation needs at least one site");
  }
  if (!(supply_v > 0.0) || !std::isfinite(supply_v)) {
    throw std::invalid_argument("supply_v must be positive and finite");
  }
  SimulationState state;
  state.sites = std::move(sites);
  state.supply_v = supply_v;
  state.topology = policy.topology(state.sites);
  validate(state.topology, state.sites.size());
  return state;
}

SimulationTrace run(const SimulationState& initial, const TopologyPolicy& policy,
                    const RunOptions& options) {
  if (!(options.dt > 0.0)) {
    throw std::invalid_argument("run: dt must be positive");
  }
  if (options.max_steps <= 0) {
    throw std::invalid_argument("run: max_steps must be positive");
  }
  if (options.record_every <= 0) {
    throw std::invalid_argument("run: record_every must be positive");
  }

  SimulationTrace trace;
  trace.supply_v = initial.supply_v;
  trace.dt = options.dt;
  for (const MemristorState& site : initial.sites) {
    trace.labels.push_back(site.label);
    trace.params.push_back(site.params);
  }

  SimulationState state = initial;
  state.topology = policy.topology(state.sites);
  validate(state.topology, state.sites.size());

  for (std::size_t i = 0; i < state.sites.size(); ++i) {
    if (state.sites[i].clamped) {
      trace.events.push_back({i, state.time, state.step});
    }
  }

  if (all_clamped(state.sites)) {
    trace.status = RunStatus::Completed;
    trace.depletion_time = state.time;
    trace.total_delivered = state.delivered;
    return trace;
  }

  for (std::int64_t n = 0; n < options.max_steps; ++n) {
    StepOutcome out = step(state, options.dt, &policy);
    const bool done = all_clamped(out.state.sites);
    trace.events.insert(trace.events.end(), out.events.begin(), out.events.end());
    if (options.keep_records && (out.record.step % options.record_every == 0 || done)) {
      trace.records.push_back(std::move(out.record));
    }
    state = std::move(out.state);
    ++trace.steps_taken;
    if (done) {
      trace.status = RunStatus::Completed;
      trace.depletion_step = state.step - 1;
      trace.depletion_time = state.time;
      break;
    }
  }
  trace.total_delivered = state.delivered;
  return trace;
}

}  // namespace memforage
