#include "dwall/propagate.hpp"

#include <cmath>
#include <vector>

namespace dwall {

std::optional<StateVector> real_gauge(const ComplexMatrix& h, double tol) {
  const Index n = h.rows();
  StateVector g = StateVector::Zero(n);
  std::vector<Index> queue;
  queue.reserve(static_cast<std::size_t>(n));
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  for (Index root = 0; root < n; ++root) {
    if (g(root) != Complex(0.0)) continue;
    g(root) = 1.0;
    queue.assign(1, root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Index a = queue[head];
      for (Index b = 0; b < n; ++b) {
        const Complex hab = h(a, b);
        if (b == a || g(b) != Complex(0.0) || std::abs(hab) <= tol * scale) continue;
        g(b) = g(a) * std::conj(hab) / std::abs(hab);
        queue.push_back(b);
      }
    }
  }
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (std::abs((std::conj(g(a)) * h(a, b) * g(b)).imag()) > tol * scale) return std::nullopt;
  return g;
}

void Propagator::compute(const ComplexMatrix& h) {
  if (!h.allFinite()) throw NumericalError("non-finite Hamiltonian entries");
  if (auto g = real_gauge(h)) {
    real_ = true;
    gauge_ = *g;
    const RealMatrix hr = (gauge_.conjugate().asDiagonal() * h * gauge_.asDiagonal()).real();
    real_part_.compute(hr);
  } else {
    real_ = false;
    complex_part_.compute(h);
  }
}

StateVector Propagator::apply(const StateVector& psi, double t) const {
  if (!real_) return complex_part_.apply(psi, t);
  const StateVector local = gauge_.conjugate().cwiseProduct(psi);
  return gauge_.cwiseProduct(real_part_.apply(local, t));
}

StateVector Propagator::to_eigenbasis(const StateVector& psi) const {
  if (!real_) return complex_part_.to_eigenbasis(psi);
  return real_part_.to_eigenbasis(gauge_.conjugate().cwiseProduct(psi));
}

const RealVector& Propagator::energies() const {
  return real_ ? real_part_.energies() : complex_part_.energies();
}

int step_count(double duration, double dt) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  if (duration < 0.0) throw ValidationError("duration must be non-negative");
  return static_cast<int>(std::max(0.0, std::round(duration / dt)));
}

StateVector evolve(StateVector psi, const HamiltonianFn& hamiltonian, double t0, double duration, double dt,
                   const StepObserver& observer) {
  const int steps = step_count(duration, dt);
  if (steps == 0) return psi;
  const double h = duration / steps;
  Propagator propagator;
  ComplexMatrix previous;
  for (int s = 0; s < steps; ++s) {
    ComplexMatrix current = hamiltonian(t0 + (s + 0.5) * h);
    if (previous.size() == 0 || current != previous) {
      propagator.compute(current);
      previous = std::move(current);
    }
    psi = propagator.apply(psi, h);
    if (!psi.allFinite()) throw NumericalError("non-finite amplitudes during evolution");
    if (observer) observer(t0 + (s + 1) * h, psi);
  }
  return psi;
}

}  // namespace dwall
