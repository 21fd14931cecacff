#include "dwall/pulse.hpp"

#include <cmath>

namespace dwall {

void ProtocolPlan::validate() const {
  if (t_prep < 0.0) throw ValidationError("t_prep must be non-negative");
  if (t_tr < 2.0 * t_prep) throw ValidationError("t_tr must be at least 2 t_prep");
  if (f0 <= 0.0 || f0 > 1.0) throw ValidationError("fidelity threshold must lie in (0, 1]");
}

double pulse_envelope(double t, double t_prep, double t_tr) {
  if (t <= 0.0 || t >= t_tr) return 0.0;
  if (t_prep <= 0.0) return 1.0;
  const double omega = kPi / (2.0 * t_prep);
  if (t < t_prep) {
    const double s = std::sin(omega * t);
    return s * s;
  }
  if (t <= t_tr - t_prep) return 1.0;
  const double s = std::sin(omega * (t - t_tr));
  return s * s;
}

double PulseSchedule::pulse_value(int domain, double t) const {
  const auto& c = plan.controls.per_domain;
  if (domain < 1 || domain > static_cast<int>(c.size())) throw IndexError("domain index out of range");
  return c[static_cast<std::size_t>(domain - 1)] * pulse_envelope(t, plan.t_prep, plan.t_tr);
}

}  // namespace dwall
