#include "memforage/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace memforage {

double series_phase_time(std::size_t clamped_count, double active_r_on_sum, double q_begin,
                         double q_end, double supply_v, double r_off, double beta) {
  if (!(q_begin >= 0.0) || !(q_end >= q_begin)) {
    throw std::invalid_argument("series_phase_time: need 0 <= q_begin <= q_end");
  }
  if (!(supply_v > 0.0)) {
    throw std::invalid_argument("series_phase_time: supply_v must be positive");
  }
  if (active_r_on_sum < 0.0) {
    throw std::invalid_argument("series_phase_time: negative r_on sum");
  }
  if (q_end == q_begin) {
    return 0.0;
  }
  if (active_r_on_sum == 0.0) {
    throw std::invalid_argument("series_phase_time: no active device can advance the charge");
  }
  const double base = static_cast<double>(clamped_count) * r_off + active_r_on_sum;
  const double curve = active_r_on_sum * beta * r_off / 2.0;
  return (base * (q_end - q_begin) + curve * (q_end * q_end - q_begin * q_begin)) / supply_v;
}

PhasePlan series_depletion_plan(std::span<const MemristorParams> sites, double supply_v,
                                std::size_t extra_clamped) {
  if (sites.empty()) {
    throw std::invalid_argument("series_depletion_plan: no sites");
  }
  for (const MemristorParams& p : sites) {
    validate(p);
    if (p.r_off != sites.front().r_off || p.beta != sites.front().beta) {
      throw std::invalid_argument("series_depletion_plan: sites must share r_off and beta");
    }
  }
  const double r_off = sites.front().r_off;
  const double beta = sites.front().beta;

  // Worst (highest M(0)) first; ties keep input order.
  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sites[a].r_on > sites[b].r_on; });

  PhasePlan plan;
  plan.site_depletion_times.assign(sites.size(), 0.0);
  double active_sum = 0.0;
  for (const MemristorParams& p : sites) active_sum += p.r_on;

  std::size_t clamped = extra_clamped;
  double q = 0.0;
  double elapsed = 0.0;
  for (std::size_t site : order) {
    Phase phase;
    phase.clamped_count = clamped;
    phase.active_r_on_sum = active_sum;
    phase.q_begin = q;
    phase.q_end = std::max(q, depletion_charge(sites[site]));
    phase.duration = series_phase_time(clamped, active_sum, phase.q_begin, phase.q_end, supply_v,
                                       r_off, beta);
    elapsed += phase.duration;
    phase.end_time = elapsed;
    phase.depleting_site = site;
    plan.site_depletion_times[site] = elapsed;
    plan.phases.push_back(phase);

    q = phase.q_end;
    ++clamped;
    active_sum -= sites[site].r_on;
    if (active_sum < 0.0) active_sum = 0.0;
  }
  plan.total_time = elapsed;
  return plan;
}

StrategyOracle strategy_oracle_time(std::span<const MemristorParams> sites, double supply_v,
                                    StrategyKind kind, SequentialMode mode) {
  const StrategySchedule schedule = make_schedule(kind, sites, mode);
  StrategyOracle out;
  out.site_depletion_times.assign(sites.size(), 0.0);

  switch (kind) {
    case StrategyKind::AllSites: {
      const PhasePlan plan = series_depletion_plan(sites, supply_v);
      out.site_depletion_times = plan.site_depletion_times;
      out.phases.push_back({"all sites in series", plan.total_time});
      out.total_time = plan.total_time;
      break;
    }
    case StrategyKind::Sequential: {
      // Residual branches sit across the ideal supply, so in parallel mode each
      // visit is an isolated singleton. In shared-series mode the k-th visit
      // drags k clamped members along.
      double elapsed = 0.0;
      std::size_t visited = 0;
      for (std::size_t site : schedule.order()) {
        const std::size_t burden = mode == SequentialMode::SharedSeries ? visited : 0;
        const PhasePlan plan = series_depletion_plan(std::span(&sites[site], 1), supply_v, burden);
        elapsed += plan.total_time;
        out.site_depletion_times[site] = elapsed;
        out.phases.push_back({"site " + std::to_string(site + 1) + " alone", plan.total_time});
        ++visited;
      }
      out.total_time = elapsed;
      break;
    }
    case StrategyKind::Leafcutter: {
      const std::size_t best = schedule.order().front();
      const PhasePlan first = series_depletion_plan(std::span(&sites[best], 1), supply_v);
      out.site_depletion_times[best] = first.total_time;
      out.phases.push_back({"best site alone", first.total_time});
      out.total_time = first.total_time;

      std::vector<MemristorParams> rest;
      std::vector<std::size_t> rest_index;
      for (std::size_t i = 0; i < sites.size(); ++i) {
        if (i == best) continue;
        rest.push_back(sites[i]);
        rest_index.push_back(i);
      }
      if (!rest.empty()) {
        const PhasePlan second = series_depletion_plan(rest, supply_v);
        for (std::size_t k = 0; k < rest.size(); ++k) {
          out.site_depletion_times[rest_index[k]] = first.total_time + second.site_depletion_times[k];
        }
        out.phases.push_back({"remaining sites in series", second.total_time});
        out.total_time += second.total_time;
      }
      break;
    }
  }
  return out;
}

}  // namespace memforage
