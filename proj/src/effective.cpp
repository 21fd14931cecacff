#include "dwall/effective.hpp"

#include "dwall/propagate.hpp"

#include <cmath>

namespace dwall {

ComplexMatrix EffectiveChain::hamiltonian() const {
  const Index n = size();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Index k = 1; k < n; ++k) {
    h(k, k - 1) = couplings[static_cast<std::size_t>(k - 1)];
    h(k - 1, k) = std::conj(couplings[static_cast<std::size_t>(k - 1)]);
  }
  return h;
}

namespace {

Complex int_power(Complex base, int exponent) {
  if (exponent < 0) {
    base = 1.0 / base;
    exponent = -exponent;
  }
  Complex out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

double real_power(double base, int exponent) {
  return std::real(int_power(Complex(base), exponent));
}

}  // namespace

EffectiveChain effective_couplings(const LatticeSpec& spec, const ControlVector& controls) {
  spec.validate();
  const int N = spec.domains;
  const int ell = spec.inner;
  const auto& c = controls.per_domain;
  if (c.size() != static_cast<std::size_t>(N)) throw ValidationError("control vector length does not match the domain count");
  EffectiveChain chain;
  chain.labels = chain_labels(spec);
  const NormalizationSet norms = normalization_constants(spec, controls);

  if (spec.kind == ModelKind::SSH) {
    const double w = spec.strong_bond;
    auto state_norm = [&](int index) {
      if (index == 0) return norms.ssh_left;
      if (index == N) return norms.ssh_right;
      return norms.ssh_s[static_cast<std::size_t>(index - 1)];
    };
    for (int k = 1; k <= N; ++k) {
      const double v = c[static_cast<std::size_t>(k - 1)];
      if (v < 0.0 || v >= w) throw ValidationError("SSH control must satisfy 0 <= v < w");
      if (v == 0.0) {
        chain.couplings.emplace_back(0.0);
        continue;
      }
      const double ratio = -w / v;
      const double n = state_norm(k - 1) * state_norm(k);
      double t = 0.0;
      if (N == 1) t = -v * n * real_power(ratio, -ell / 2 - 2);
      else if (k == 1 || k == N) t = v * n * real_power(ratio, -ell / 2 - 1);
      else t = -v * n * real_power(ratio, -ell / 2);
      chain.couplings.emplace_back(t);
    }
    return chain;
  }
  if (!spec.is_creutz()) throw CapabilityError("no effective chain for model kind " + to_string(spec.kind));

  const double J = spec.hopping;
  auto state_norm = [&](int index) {
    if (index == 0) return norms.left;
    if (index == N) return norms.right;
    return norms.p[static_cast<std::size_t>(index - 1)];
  };
  for (int k = 1; k <= N; ++k) {
    const double eps = c[static_cast<std::size_t>(k - 1)];
    if (eps < 0.0 || eps >= 2.0 * J) throw ValidationError("Creutz control must satisfy 0 <= c < 2J");
    if (eps == 0.0) {
      chain.couplings.emplace_back(0.0);
      continue;
    }
    const int d = N == 1 ? ell + 1 : (k == 1 || k == N ? ell : ell - 1);
    const int p = k - 1 >= 1 ? 1 : 0;
    const double n = state_norm(k - 1) * state_norm(k);
    Complex v;
    if (spec.kind == ModelKind::CreutzRunged) {
      // Overall sign chosen so that v equals <state_k|H|state_{k-1}> in the state gauge used here.
      const double sign = (k + p) % 2 == 0 ? -1.0 : 1.0;
      v = 2.0 * sign * kI * eps * n * real_power(-2.0 * J / eps, -d - 2);
    } else {
      // Closed form evaluated at -eps to match the sign of the imbalance term.
      const double e = -eps;
      const double sign = (d + p) % 2 == 0 ? 1.0 : -1.0;
      const double alt = k % 2 == 0 ? 1.0 : -1.0;
      v = 2.0 * sign * e * n * int_power(alt * 2.0 * kI * J / e, -d - 2);
    }
    chain.couplings.push_back(v);
  }
  return chain;
}

std::vector<RealVector> effective_evolve(const EffectiveChain& chain, const StateVector& psi0,
                                         const std::vector<double>& times) {
  if (psi0.size() != chain.size()) throw ValidationError("initial state does not match the chain size");
  Propagator propagator(chain.hamiltonian());
  std::vector<RealVector> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(propagator.apply(psi0, t).cwiseAbs2());
  return out;
}

EffectiveTrajectory effective_evolve(const LatticeSpec& spec, const ProtocolPlan& plan, const StateVector& psi0,
                                     double dt) {
  plan.validate();
  EffectiveTrajectory traj;
  const auto hamiltonian = [&](double t) {
    ControlVector c = plan.controls;
    const double s = pulse_envelope(t, plan.t_prep, plan.t_tr);
    for (double& x : c.per_domain) x *= s;
    return effective_couplings(spec, c).hamiltonian();
  };
  traj.times.push_back(0.0);
  traj.occupations.push_back(psi0.cwiseAbs2());
  traj.final_state = evolve(psi0, hamiltonian, 0.0, plan.t_tr, dt, [&](double t, const StateVector& psi) {
    traj.times.push_back(t);
    traj.occupations.push_back(psi.cwiseAbs2());
  });
  return traj;
}

double predict_transfer_time(const LatticeSpec& spec, double control) {
  const int N = spec.domains;
  if (N > 2) throw CapabilityError("closed-form transfer times exist only for N = 1, 2");
  const int ell = spec.inner;
  if (spec.kind == ModelKind::SSH) {
    const double v = control;
    const double w = spec.strong_bond;
    if (!(v > 0.0 && v < w)) throw ValidationError("SSH control must satisfy 0 < v < w");
    if (N == 1) return kPi * v / (2.0 * (w * w - v * v)) * std::pow(w / v, ell / 2 + 2);
    return kPi * std::sqrt(w * w + v * v) / (std::sqrt(2.0) * (w * w - v * v)) * std::pow(w / v, ell / 2 + 1);
  }
  if (!spec.is_creutz()) throw CapabilityError("no closed-form transfer time for model kind " + to_string(spec.kind));
  const double e = control;
  const double J = spec.hopping;
  if (!(e > 0.0 && e < 2.0 * J)) throw ValidationError("Creutz control must satisfy 0 < c < 2J");
  if (N == 1) return kPi * e / (2.0 * (4.0 * J * J - e * e)) * std::pow(2.0 * J / e, ell + 3);
  return kPi * e / (4.0 * J * J - e * e) * std::pow(2.0 * J / e, ell + 2);
}

double localization_length(double control, double hopping) {
  if (!(control > 0.0)) throw ValidationError("control must be positive");
  if (control >= 2.0 * hopping) throw ValidationError("control at or beyond the phase transition");
  return 1.0 / std::log10(2.0 * hopping / control);
}

double default_t_prep(const LatticeSpec& spec) { return spec.kind == ModelKind::SSH ? 15.0 : 30.0; }

}  // namespace dwall
