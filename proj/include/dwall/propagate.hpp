#pragma once

#include "dwall/types.hpp"

#include <functional>
#include <optional>

namespace dwall {

// Eigendecomposition of a Hermitian matrix with scalar type Scalar (double or
// std::complex<double>), used to apply exp(-i H dt) exactly.
template <typename Scalar>
class HermitianExponential {
 public:
  void compute(const Matrix<Scalar>& h) {
    solver_.compute(h);
    if (solver_.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  }
  const RealVector& energies() const { return solver_.eigenvalues(); }
  const Matrix<Scalar>& vectors() const { return solver_.eigenvectors(); }

  StateVector to_eigenbasis(const StateVector& psi) const {
    if constexpr (std::is_same_v<Scalar, Real>) {
      const Matrix<Real>& v = vectors();
      RealVector re = v.transpose() * psi.real();
      RealVector im = v.transpose() * psi.imag();
      return re.cast<Complex>() + kI * im.cast<Complex>();
    } else {
      return vectors().adjoint() * psi;
    }
  }
  StateVector from_eigenbasis(const StateVector& coeffs) const {
    if constexpr (std::is_same_v<Scalar, Real>) {
      const Matrix<Real>& v = vectors();
      RealVector re = v * coeffs.real();
      RealVector im = v * coeffs.imag();
      return re.cast<Complex>() + kI * im.cast<Complex>();
    } else {
      return vectors() * coeffs;
    }
  }
  // exp(-i H t) psi
  StateVector apply(const StateVector& psi, double t) const {
    StateVector c = to_eigenbasis(psi);
    const RealVector& e = energies();
    for (Index n = 0; n < c.size(); ++n) c(n) *= std::polar(1.0, -e(n) * t);
    return from_eigenbasis(c);
  }

 private:
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver_;
};

// Diagonal unitary G with G^dagger H G real, when one exists.
std::optional<StateVector> real_gauge(const ComplexMatrix& h, double tol = 1e-13);

// exp(-i H t) for a Hermitian H, switching to real arithmetic when H is
// gauge-equivalent to a real matrix.
class Propagator {
 public:
  Propagator() = default;
  explicit Propagator(const ComplexMatrix& h) { compute(h); }

  void compute(const ComplexMatrix& h);
  StateVector apply(const StateVector& psi, double t) const;
  StateVector apply_adjoint(const StateVector& psi, double t) const { return apply(psi, -t); }
  StateVector to_eigenbasis(const StateVector& psi) const;
  const RealVector& energies() const;
  bool uses_real_arithmetic() const { return real_; }

 private:
  bool real_ = false;
  StateVector gauge_;
  HermitianExponential<Real> real_part_;
  HermitianExponential<Complex> complex_part_;
};

using HamiltonianFn = std::function<ComplexMatrix(double t)>;
using StepObserver = std::function<void(double t, const StateVector& psi)>;

// Evolves psi over [t0, t0 + duration] with midpoint-Hamiltonian exact steps of
// size close to dt (the step is shrunk so an integer number of steps fits).
// Decompositions are reused while consecutive midpoint Hamiltonians are equal.
StateVector evolve(StateVector psi, const HamiltonianFn& hamiltonian, double t0, double duration, double dt,
                   const StepObserver& observer = {});

int step_count(double duration, double dt);

}  // namespace dwall
