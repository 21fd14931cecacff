#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dwall {

using Real = double;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = Matrix<Complex>;
using RealMatrix = Matrix<Real>;
using StateVector = Vector<Complex>;
using RealVector = Vector<Real>;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Error taxonomy. The CLI maps NumericalError to its own exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct IndexError : Error {
  using Error::Error;
};
struct CapabilityError : Error {
  using Error::Error;
};
struct NumericalError : Error {
  using Error::Error;
};
struct SingularError : NumericalError {
  using NumericalError::NumericalError;
};
struct NotFoundError : Error {
  NotFoundError(const std::string& what, double best_fidelity, double best_time)
      : Error(what), best_fidelity(best_fidelity), best_time(best_time) {}
  double best_fidelity;
  double best_time;
};
struct OptimizationError : Error {
  using Error::Error;
};
struct UnreliablePhaseError : Error {
  using Error::Error;
};

}  // namespace dwall
