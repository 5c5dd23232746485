#include "memforage/strategy.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace memforage {

std::string_view to_string(StrategyKind kind) noexcept {
  switch (kind) {
    case StrategyKind::AllSites:
      return "all-sites";
    case StrategyKind::Sequential:
      return "sequential";
    case StrategyKind::Leafcutter:
      return "leafcutter";
  }
  return "unknown";
}

std::string_view to_string(SequentialMode mode) noexcept {
  switch (mode) {
    case SequentialMode::ParallelResidual:
      return "parallel-residual";
    case SequentialMode::SharedSeries:
      return "shared-series";
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view text) {
  for (auto kind : {StrategyKind::AllSites, StrategyKind::Sequential, StrategyKind::Leafcutter}) {
    if (text == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(text) +
                              "' (expected all-sites, sequential or leafcutter)");
}

SequentialMode parse_sequential_mode(std::string_view text) {
  for (auto mode : {SequentialMode::ParallelResidual, SequentialMode::SharedSeries}) {
    if (text == to_string(mode)) return mode;
  }
  throw std::invalid_argument("unknown sequential mode '" + std::string(text) +
                              "' (expected parallel-residual or shared-series)");
}

std::vector<std::size_t> richness_order(std::span<const MemristorParams> sites) {
  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sites[a].r_on < sites[b].r_on;
  });
  return order;
}

namespace {

std::vector<std::size_t> checked_order(std::span<const MemristorParams> sites) {
  if (sites.empty()) {
    throw std::invalid_argument("strategy needs at least one site");
  }
  for (const MemristorParams& p : sites) {
    validate(p);
  }
  return richness_order(sites);
}

}  // namespace

StrategySchedule all_sites_schedule(std::span<const MemristorParams> sites) {
  return StrategySchedule(StrategyKind::AllSites, SequentialMode::ParallelResidual, checked_order(sites));
}

StrategySchedule sequential_schedule(std::span<const MemristorParams> sites, SequentialMode mode) {
  return StrategySchedule(StrategyKind::Sequential, mode, checked_order(sites));
}

StrategySchedule leafcutter_schedule(std::span<const MemristorParams> sites) {
  return StrategySchedule(StrategyKind::Leafcutter, SequentialMode::ParallelResidual, checked_order(sites));
}

StrategySchedule make_schedule(StrategyKind kind, std::span<const MemristorParams> sites,
                               SequentialMode mode) {
  switch (kind) {
    case StrategyKind::AllSites:
      return all_sites_schedule(sites);
    case StrategyKind::Sequential:
      return sequential_schedule(sites, mode);
    case StrategyKind::Leafcutter:
      return leafcutter_schedule(sites);
  }
  throw std::invalid_argument("unknown strategy kind");
}

Topology StrategySchedule::topology(std::span<const MemristorState> sites) const {
  if (sites.size() != order_.size()) {
    throw std::invalid_argument("schedule built for " + std::to_string(order_.size()) +
                                " sites, got " + std::to_string(sites.size()));
  }
  Topology out;
  switch (kind_) {
    case StrategyKind::AllSites: {
      Branch all(sites.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      out.branches.push_back(std::move(all));
      break;
    }
    case StrategyKind::Sequential: {
      Branch depleted;
      std::optional<std::size_t> active;
      for (std::size_t site : order_) {
        if (sites[site].clamped) {
          depleted.push_back(site);
        } else if (!active) {
          active = site;
        }
      }
      if (mode_ == SequentialMode::SharedSeries) {
        Branch chain = depleted;
        if (active) chain.push_back(*active);
        out.branches.push_back(std::move(chain));
      } else {
        if (active) out.branches.push_back({*active});
        for (std::size_t site : depleted) out.branches.push_back({site});
      }
      break;
    }
    case StrategyKind::Leafcutter: {
      const std::size_t best = order_.front();
      if (!sites[best].clamped || sites.size() == 1) {
        out.branches.push_back({best});
        break;
      }
      Branch rest;
      for (std::size_t i = 0; i < sites.size(); ++i) {
        if (i != best) rest.push_back(i);
      }
      out.branches.push_back(std::move(rest));
      out.branches.push_back({best});
      break;
    }
  }
  return out;
}

int StrategySchedule::phase(std::span<const MemristorState> sites) const {
  switch (kind_) {
    case StrategyKind::AllSites:
      return 1;
    case StrategyKind::Leafcutter:
      return sites[order_.front()].clamped ? 2 : 1;
    case StrategyKind::Sequential: {
      int position = 1;
      for (std::size_t site : order_) {
        if (!sites[site].clamped) return position;
        ++position;
      }
      return position;
    }
  }
  return 1;
}

std::string StrategySchedule::describe() const {
  std::string text(to_string(kind_));
  if (kind_ == StrategyKind::Sequential) {
    text += " (";
    text += to_string(mode_);
    text += ")";
  }
  return text;
}

}  // namespace memforage
