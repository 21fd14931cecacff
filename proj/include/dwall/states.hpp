#pragma once

#include "dwall/hamiltonian.hpp"

#include <vector>

namespace dwall {

enum class StateKind { Left, Right, S, P };
enum class Extension { Compact, Hybridized, SLeft, SRight };

struct BoundaryStateId {
  StateKind kind = StateKind::Left;
  int k = 0;
  Extension extension = Extension::Compact;

  static BoundaryStateId left(Extension e = Extension::Compact) { return {StateKind::Left, 0, e}; }
  static BoundaryStateId right(Extension e = Extension::Compact) { return {StateKind::Right, 0, e}; }
  static BoundaryStateId s(int k, Extension e = Extension::Compact) { return {StateKind::S, k, e}; }
  static BoundaryStateId p(int k, Extension e = Extension::Compact) { return {StateKind::P, k, e}; }
};

std::string to_string(const BoundaryStateId& id);
// Chirality x of a computational state under sigma_y: -1 for L, (-1)^{k+1} for S_k, (-1)^{N+1} for R.
int chirality(const BoundaryStateId& id, const LatticeSpec& spec);

StateVector compact_state(const BoundaryStateId& id, const LatticeSpec& spec);
StateVector hybridized_state(const BoundaryStateId& id, const LatticeSpec& spec, const ControlVector& controls);
StateVector hybridized_state(const BoundaryStateId& id, const LatticeSpec& spec, double control);

struct NormalizationSet {
  double left = 0.0;
  double right = 0.0;
  std::vector<double> p;      // N_P(k), k = 1..N-1 stored at k-1
  double ssh_left = 0.0;
  double ssh_right = 0.0;
  std::vector<double> ssh_s;  // N'_S(k)
};

NormalizationSet normalization_constants(const LatticeSpec& spec, const ControlVector& controls);

// Protected states of a pristine lattice in chain order: L, P_1..P_{N-1}, R (CL) or L, S_1.., R (SSH).
std::vector<BoundaryStateId> chain_labels(const LatticeSpec& spec);
std::vector<StateVector> chain_states(const LatticeSpec& spec, const ControlVector& controls);

// Distance between an analytic state and its phase-aligned projection onto the
// protected subspace of h (the 2N or N+1 eigenvectors closest to zero energy).
double state_deviation(const StateVector& analytic, const HamiltonianMatrix& h);

}  // namespace dwall
