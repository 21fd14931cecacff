#pragma once

#include "dwall/disorder.hpp"
#include "dwall/lattice.hpp"

namespace dwall {

struct HamiltonianMatrix {
  ComplexMatrix entries;
  LatticeSpec spec;

  Index dim() const { return entries.rows(); }
  double hermiticity_error() const;
};

HamiltonianMatrix assemble_hamiltonian(const LatticeSpec& spec, const ControlVector& controls,
                                       const DisorderRealization& disorder = {});

ComplexMatrix chiral_operator(const LatticeSpec& spec);
// max |(XH + HX)_ab|
double chiral_anticommutator_norm(const ComplexMatrix& chiral, const HamiltonianMatrix& h);

int winding_number(double control, double flux, ModelKind kind, double hopping = 1.0,
                   double strong_bond = 1.0, int k_points = 2048);

RealVector spectrum(const HamiltonianMatrix& h);
int count_zero_modes(const HamiltonianMatrix& h, double tol);

}  // namespace dwall
