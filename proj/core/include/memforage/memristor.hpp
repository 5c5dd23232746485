#pragma once

// Single-device model: a boundary-clamped memristor whose memristance grows
// linearly with the charge that has passed through it. All quantities are in
// reduced units.

#include <string>

namespace memforage {

/// Device constants for one resource site.
///
/// The lower bound `r_on` doubles as the initial memristance M(0): a richer or
/// closer site starts lower. `beta` sets how fast the site gets harder to work.
struct MemristorParams {
  double r_on = 1.0;
  double r_off = 100.0;
  double beta = 1.0;

  friend bool operator==(const MemristorParams&, const MemristorParams&) = default;
};

/// Throws std::invalid_argument unless 0 < r_on <= r_off and beta > 0.
void validate(const MemristorParams& params);

/// Evolving state of one site. Memristance is never stored; it is always
/// recomputed from `q`.
struct MemristorState {
  MemristorParams params;
  double q = 0.0;
  bool clamped = false;
  std::string label;
};

/// Fresh state at q = 0. A site whose r_on already equals r_off starts clamped.
MemristorState make_state(const MemristorParams& params, std::string label = {});

/// Unbounded linear form r_on + r_off * r_on * beta * q.
double linear_memristance(const MemristorParams& params, double q) noexcept;

/// Linear form clamped to [r_on, r_off].
double memristance(const MemristorParams& params, double q) noexcept;
double memristance(const MemristorState& state) noexcept;

/// Charge at which the linear form first reaches r_off:
/// (r_off - r_on) / (beta * r_on * r_off).
double depletion_charge(const MemristorParams& params) noexcept;

/// Integrates a constant current over `dt`. Charge keeps flowing after the
/// clamp; only the memristance freezes at r_off.
///
/// Throws std::invalid_argument for current < 0 or dt <= 0.
MemristorState accumulate(const MemristorState& state, double current, double dt);

}  // namespace memforage
