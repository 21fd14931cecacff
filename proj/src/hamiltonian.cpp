#include "dwall/hamiltonian.hpp"

#include <cmath>
#include <functional>

namespace dwall {

double HamiltonianMatrix::hermiticity_error() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

double bond_scale(const ControlVector& controls, Index a, Index b) {
  double s = 1.0;
  if (auto it = controls.bond_scale.find(a); it != controls.bond_scale.end()) s *= it->second;
  if (auto it = controls.bond_scale.find(b); it != controls.bond_scale.end()) s *= it->second;
  return s;
}

}  // namespace

HamiltonianMatrix assemble_hamiltonian(const LatticeSpec& spec, const ControlVector& controls,
                                       const DisorderRealization& disorder) {
  spec.validate();
  const bool uses_domains = !spec.is_trivial();
  if (uses_domains && controls.per_domain.size() != static_cast<std::size_t>(spec.domains))
    throw ValidationError("control vector length does not match the domain count");

  const Index n = spec.site_count();
  HamiltonianMatrix h{ComplexMatrix::Zero(n, n), spec};
  ComplexMatrix& H = h.entries;
  const auto bonds = lattice_bonds(spec);
  if (!disorder.pristine() && disorder.bond_noise.size() != bonds.size())
    throw ValidationError("disorder realization does not match the lattice");

  for (std::size_t b = 0; b < bonds.size(); ++b) {
    const Bond& bond = bonds[b];
    double base = spec.hopping;
    if (bond.role == BondRole::Vertical) {
      base = rung_control(spec, controls, bond.step);
    } else if (bond.role == BondRole::Chain && spec.kind == ModelKind::SSH) {
      base = bond.weak ? controls.per_domain[static_cast<std::size_t>(bond.domain - 1)] : spec.strong_bond;
    }
    const double magnitude = disorder.bond_magnitude(b, base) * bond_scale(controls, bond.from, bond.to);
    Complex amplitude = -magnitude;
    if (bond.role == BondRole::Horizontal) {
      const double phi = domain_scheme(spec, bond.step).flux;
      const double s = bond.leg == Leg::A ? 1.0 : -1.0;
      amplitude *= std::polar(1.0, s * phi / 2.0);
    }
    H(bond.to, bond.from) += amplitude;
    H(bond.from, bond.to) += std::conj(amplitude);
  }

  if (spec.kind == ModelKind::CreutzImbalanced) {
    for (int j = 1; j <= spec.length(); ++j) {
      const double eps = rung_control(spec, controls, j);
      H(flat_index(j, Leg::A), flat_index(j, Leg::A)) += eps;
      H(flat_index(j, Leg::B), flat_index(j, Leg::B)) -= eps;
    }
  }
  for (const auto& [site, mu] : controls.onsite) {
    if (site < 0 || site >= n) throw IndexError("on-site control outside the lattice");
    H(site, site) += mu;
  }
  if (!disorder.site_noise.empty())
    for (Index s = 0; s < n; ++s) H(s, s) += disorder.site_shift(s);
  return h;
}

ComplexMatrix chiral_operator(const LatticeSpec& spec) {
  const Index n = spec.site_count();
  ComplexMatrix X = ComplexMatrix::Zero(n, n);
  if (spec.is_creutz()) {
    for (int j = 1; j <= spec.length(); ++j) {
      X(flat_index(j, Leg::A), flat_index(j, Leg::B)) = -kI;
      X(flat_index(j, Leg::B), flat_index(j, Leg::A)) = kI;
    }
    return X;
  }
  if (spec.kind == ModelKind::SSH) {
    for (Index s = 0; s < n; ++s) X(s, s) = s % 2 == 0 ? 1.0 : -1.0;
    return X;
  }
  throw CapabilityError("no chiral operator for model kind " + to_string(spec.kind));
}

double chiral_anticommutator_norm(const ComplexMatrix& chiral, const HamiltonianMatrix& h) {
  return (chiral * h.entries + h.entries * chiral).cwiseAbs().maxCoeff();
}

int winding_number(double control, double flux, ModelKind kind, double hopping, double strong_bond,
                   int k_points) {
  if (k_points < 8) throw ValidationError("winding grid too coarse");
  std::function<Complex(double)> q;
  if (kind == ModelKind::SSH) {
    q = [=](double k) { return control + strong_bond * std::polar(1.0, k); };
  } else if (kind == ModelKind::CreutzImbalanced || kind == ModelKind::CreutzRunged) {
    if (std::abs(std::abs(flux) - kPi) > 1e-12) throw CapabilityError("winding number implemented only at flux +-pi");
    Eigen::Matrix2cd T;
    T << -hopping * std::polar(1.0, flux / 2.0), -hopping, -hopping, -hopping * std::polar(1.0, -flux / 2.0);
    Eigen::Matrix2cd M = Eigen::Matrix2cd::Zero();
    if (kind == ModelKind::CreutzImbalanced) {
      M(0, 0) = control;
      M(1, 1) = -control;
    } else {
      M(0, 1) = M(1, 0) = -control;
    }
    const Eigen::Vector2cd plus_y = Eigen::Vector2cd(1.0, kI) / std::sqrt(2.0);
    const Eigen::Vector2cd minus_y = Eigen::Vector2cd(1.0, -kI) / std::sqrt(2.0);
    q = [=](double k) {
      const Eigen::Matrix2cd Hk = M + T * std::polar(1.0, -k) + T.adjoint() * std::polar(1.0, k);
      return Complex(plus_y.dot(Hk * minus_y));
    };
  } else {
    throw CapabilityError("winding number undefined for model kind " + to_string(kind));
  }

  const double scale = std::abs(control) + 2.0 * std::max(hopping, strong_bond);
  double total = 0.0;
  Complex prev = q(0.0);
  for (int n = 1; n <= k_points; ++n) {
    const Complex cur = q(2.0 * kPi * n / k_points);
    if (std::abs(cur) < 1e-9 * scale) throw SingularError("gap closes: winding number undefined");
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

RealVector spectrum(const HamiltonianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  return solver.eigenvalues();
}

int count_zero_modes(const HamiltonianMatrix& h, double tol) {
  const RealVector e = spectrum(h);
  return static_cast<int>((e.array().abs() < tol).count());
}

}  // namespace dwall
