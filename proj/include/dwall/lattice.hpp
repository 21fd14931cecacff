#pragma once

#include "dwall/types.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace dwall {

enum class ModelKind { CreutzImbalanced, CreutzRunged, SSH, TrivialChain, TrivialLadder };

enum class Leg { A = 0, B = 1 };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// A model instance. Multidomain kinds have L = N(l+1)+1 rungs (or sites).
// Trivial kinds reuse the same bookkeeping with N=1, so L = l+2.
struct LatticeSpec {
  ModelKind kind = ModelKind::CreutzImbalanced;
  int domains = 1;
  int inner = 4;
  double hopping = 1.0;
  double strong_bond = 1.0;
  double flux = kPi;
  // Trivial chain only: the end sites 1 and L are each split in two (a, b).
  bool split_ends = false;

  static LatticeSpec creutz(int domains, int inner, double hopping = 1.0);
  static LatticeSpec runged(int domains, int inner, double hopping = 1.0);
  static LatticeSpec ssh(int domains, int inner, double strong_bond = 1.0);
  static LatticeSpec trivial_chain(int length, double hopping = 1.0);
  static LatticeSpec trivial_ladder(int length, double hopping = 1.0);

  int length() const { return domains * (inner + 1) + 1; }
  Index site_count() const;
  bool is_ladder() const;
  bool is_creutz() const;
  bool is_trivial() const;
  void validate() const;
};

struct SiteIndex {
  int j = 1;
  Leg leg = Leg::A;
  Index flat() const { return 2 * static_cast<Index>(j - 1) + static_cast<Index>(leg); }
};

Index flat_index(int j, Leg leg);
// Flat index of site j (1-based) on a chain kind, honoring split ends.
Index chain_site(const LatticeSpec& spec, int j, Leg end_leg = Leg::A);

struct DomainInfo {
  double flux = 0.0;
  int domain = 0;
  bool is_wall = false;
};

DomainInfo domain_scheme(const LatticeSpec& spec, int j);
// Rung (or site) of wall k, j_k = k(l+1)+1, for k = 0..N.
int wall_position(const LatticeSpec& spec, int k);

struct ControlVector {
  std::vector<double> per_domain;
  // Wall index (0 = left end rung, N = right end rung) -> control.
  std::map<int, double> wall_overrides;
  // Flat site -> additional on-site potential.
  std::map<Index, double> onsite;
  // Flat site -> factor applied to every bond touching that site.
  std::map<Index, double> bond_scale;

  static ControlVector uniform(int domains, double value);
  // Mirror-symmetric controls from the outer half: (c1, c2, ...) -> c1 c2 ... c2 c1.
  static ControlVector mirrored(int domains, std::span<const double> outer_to_inner);
  bool is_mirror_symmetric(double tol = 0.0) const;
};

// Control seen by rung (CL) j: end rungs follow their domain, internal walls
// are zero unless overridden.
double rung_control(const LatticeSpec& spec, const ControlVector& controls, int j);

enum class BondRole { Horizontal, Diagonal, Vertical, Chain };

struct Bond {
  Index from = 0;
  Index to = 0;
  BondRole role = BondRole::Chain;
  int step = 0;     // rung j of the left end of the bond
  Leg leg = Leg::A; // leg of the origin site (ladders)
  bool weak = false;
  int domain = 0;
};

std::vector<Bond> lattice_bonds(const LatticeSpec& spec);

}  // namespace dwall
