#include "memforage/memristor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace memforage {

void validate(const MemristorParams& params) {
  if (!(params.r_on > 0.0) || !std::isfinite(params.r_on)) {
    throw std::invalid_argument("memristor r_on must be positive and finite");
  }
  if (!(params.r_off >= params.r_on) || !std::isfinite(params.r_off)) {
    throw std::invalid_argument("memristor r_off must be finite and >= r_on");
  }
  if (!(params.beta > 0.0) || !std::isfinite(params.beta)) {
    throw std::invalid_argument("memristor beta must be positive and finite");
  }
}

MemristorState make_state(const MemristorParams& params, std::string label) {
  validate(params);
  MemristorState state;
  state.params = params;
  state.q = 0.0;
  state.clamped = params.r_on >= params.r_off;
  state.label = std::move(label);
  return state;
}

double linear_memristance(const MemristorParams& params, double q) noexcept {
  return params.r_on + params.r_off * params.r_on * params.beta * q;
}

double memristance(const MemristorParams& params, double q) noexcept {
  return std::clamp(linear_memristance(params, q), params.r_on, params.r_off);
}

double memristance(const MemristorState& state) noexcept {
  if (state.clamped) {
    return state.params.r_off;
  }
  return memristance(state.params, state.q);
}

double depletion_charge(const MemristorParams& params) noexcept {
  return (params.r_off - params.r_on) / (params.beta * params.r_on * params.r_off);
}

MemristorState accumulate(const MemristorState& state, double current, double dt) {
  if (!(current >= 0.0)) {
    throw std::invalid_argument("accumulate: current must be non-negative");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("accumulate: dt must be positive");
  }
  MemristorState next = state;
  next.q = state.q + current * dt;
  if (!next.clamped && linear_memristance(next.params, next.q) >= next.params.r_off) {
    next.clamped = true;
  }
  return next;
}

}  // namespace memforage
