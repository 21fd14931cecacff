#pragma once

#include "dwall/lattice.hpp"

#include <optional>

namespace dwall {

// Per-domain controls, ramp time and total transfer time of one transfer pulse.
struct ProtocolPlan {
  ControlVector controls;
  double t_prep = 30.0;
  double t_tr = 0.0;
  double f0 = 0.995;

  void validate() const;
};

// Three-piece sin^2 envelope: ramp up over [0, t_prep], plateau at 1,
// ramp down over [t_tr - t_prep, t_tr]. Zero outside [0, t_tr].
double pulse_envelope(double t, double t_prep, double t_tr);

struct BarrierPlan {
  int domain = 0;          // 1-based domain that becomes trivial
  double height = 20.0;    // eps_bar
  double t_prep = 30.0;    // t'_prep
};

struct PulseSchedule {
  ProtocolPlan plan;
  std::optional<BarrierPlan> barrier;

  double pulse_value(int domain, double t) const;
};

}  // namespace dwall
