#include "dwall/lattice.hpp"

#include <cmath>

namespace dwall {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::CreutzImbalanced: return "cl";
    case ModelKind::CreutzRunged: return "runged";
    case ModelKind::SSH: return "ssh";
    case ModelKind::TrivialChain: return "trivial-chain";
    case ModelKind::TrivialLadder: return "trivial-ladder";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "cl" || name == "creutz") return ModelKind::CreutzImbalanced;
  if (name == "runged") return ModelKind::CreutzRunged;
  if (name == "ssh") return ModelKind::SSH;
  if (name == "trivial-chain" || name == "chain") return ModelKind::TrivialChain;
  if (name == "trivial-ladder" || name == "ladder") return ModelKind::TrivialLadder;
  throw ValidationError("unknown model kind '" + name + "'");
}

LatticeSpec LatticeSpec::creutz(int domains, int inner, double hopping) {
  LatticeSpec s;
  s.kind = ModelKind::CreutzImbalanced;
  s.domains = domains;
  s.inner = inner;
  s.hopping = hopping;
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::runged(int domains, int inner, double hopping) {
  LatticeSpec s = creutz(domains, inner, hopping);
  s.kind = ModelKind::CreutzRunged;
  return s;
}

LatticeSpec LatticeSpec::ssh(int domains, int inner, double strong_bond) {
  LatticeSpec s;
  s.kind = ModelKind::SSH;
  s.domains = domains;
  s.inner = inner;
  s.strong_bond = strong_bond;
  s.flux = 0.0;
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::trivial_chain(int length, double hopping) {
  LatticeSpec s;
  s.kind = ModelKind::TrivialChain;
  s.domains = 1;
  s.inner = length - 2;
  s.hopping = hopping;
  s.flux = 0.0;
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::trivial_ladder(int length, double hopping) {
  LatticeSpec s = trivial_chain(length, hopping);
  s.kind = ModelKind::TrivialLadder;
  return s;
}

bool LatticeSpec::is_ladder() const {
  return kind == ModelKind::CreutzImbalanced || kind == ModelKind::CreutzRunged ||
         kind == ModelKind::TrivialLadder;
}

bool LatticeSpec::is_creutz() const {
  return kind == ModelKind::CreutzImbalanced || kind == ModelKind::CreutzRunged;
}

bool LatticeSpec::is_trivial() const {
  return kind == ModelKind::TrivialChain || kind == ModelKind::TrivialLadder;
}

Index LatticeSpec::site_count() const {
  const Index L = length();
  if (is_ladder()) return 2 * L;
  if (kind == ModelKind::TrivialChain && split_ends) return L + 2;
  return L;
}

void LatticeSpec::validate() const {
  if (domains < 1) throw ValidationError("domain count must be positive");
  if (is_trivial()) {
    if (inner < 0) throw ValidationError("trivial lattice needs at least two sites");
    if (split_ends && inner < 1) throw ValidationError("split-end chain needs at least three sites");
  } else if (inner < 2) {
    throw ValidationError("inner length must be at least 2");
  }
  if (kind == ModelKind::SSH && inner % 2 != 0)
    throw ValidationError("SSH chains require an even inner length");
  if (split_ends && kind != ModelKind::TrivialChain)
    throw ValidationError("split ends are only defined for the trivial chain");
  if (!(hopping > 0.0) || !(strong_bond > 0.0)) throw ValidationError("hoppings must be positive");
}

Index flat_index(int j, Leg leg) { return SiteIndex{j, leg}.flat(); }

Index chain_site(const LatticeSpec& spec, int j, Leg end_leg) {
  const int L = spec.length();
  if (j < 1 || j > L) throw IndexError("site index out of range");
  if (!spec.split_ends) return j - 1;
  if (j == 1) return static_cast<Index>(end_leg);
  if (j == L) return L + static_cast<Index>(end_leg);
  return j;
}

DomainInfo domain_scheme(const LatticeSpec& spec, int j) {
  const int L = spec.length();
  if (j < 1 || j > L) throw IndexError("rung index " + std::to_string(j) + " out of range");
  const int period = spec.inner + 1;
  DomainInfo info;
  info.domain = (j - 1 + period - 1) / period;
  info.is_wall = (j - 1) % period == 0;
  if (spec.is_creutz()) {
    const int plaquette_domain = (j + period - 1) / period;
    info.flux = plaquette_domain % 2 == 1 ? spec.flux : -spec.flux;
  }
  return info;
}

int wall_position(const LatticeSpec& spec, int k) {
  if (k < 0 || k > spec.domains) throw IndexError("wall index out of range");
  return k * (spec.inner + 1) + 1;
}

ControlVector ControlVector::uniform(int domains, double value) {
  ControlVector c;
  c.per_domain.assign(static_cast<std::size_t>(domains), value);
  return c;
}

ControlVector ControlVector::mirrored(int domains, std::span<const double> outer_to_inner) {
  if (outer_to_inner.empty()) throw ValidationError("mirrored controls need at least one value");
  ControlVector c;
  c.per_domain.resize(static_cast<std::size_t>(domains));
  for (int d = 0; d < domains; ++d) {
    const int depth = std::min(d, domains - 1 - d);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(depth), outer_to_inner.size() - 1);
    c.per_domain[static_cast<std::size_t>(d)] = outer_to_inner[idx];
  }
  return c;
}

bool ControlVector::is_mirror_symmetric(double tol) const {
  const std::size_t n = per_domain.size();
  for (std::size_t d = 0; d < n / 2; ++d)
    if (std::abs(per_domain[d] - per_domain[n - 1 - d]) > tol) return false;
  return true;
}

double rung_control(const LatticeSpec& spec, const ControlVector& controls, int j) {
  const DomainInfo info = domain_scheme(spec, j);
  if (controls.per_domain.size() != static_cast<std::size_t>(spec.domains))
    throw ValidationError("control vector length does not match the domain count");
  if (!info.is_wall) return controls.per_domain[static_cast<std::size_t>(info.domain - 1)];
  const int k = info.domain;
  if (auto it = controls.wall_overrides.find(k); it != controls.wall_overrides.end())
    return it->second;
  if (k == 0) return controls.per_domain.front();
  if (k == spec.domains) return controls.per_domain.back();
  return 0.0;
}

std::vector<Bond> lattice_bonds(const LatticeSpec& spec) {
  std::vector<Bond> bonds;
  const int L = spec.length();
  if (spec.is_ladder()) {
    bonds.reserve(static_cast<std::size_t>(5 * L));
    for (int j = 1; j < L; ++j) {
      const int domain = domain_scheme(spec, j + 1).domain;
      for (Leg leg : {Leg::A, Leg::B}) {
        const Leg other = leg == Leg::A ? Leg::B : Leg::A;
        bonds.push_back({flat_index(j, leg), flat_index(j + 1, leg), BondRole::Horizontal, j, leg, false, domain});
        bonds.push_back({flat_index(j, leg), flat_index(j + 1, other), BondRole::Diagonal, j, leg, false, domain});
      }
    }
    if (spec.kind == ModelKind::CreutzRunged) {
      for (int j = 1; j <= L; ++j)
        bonds.push_back({flat_index(j, Leg::A), flat_index(j, Leg::B), BondRole::Vertical, j, Leg::A, false,
                         domain_scheme(spec, j).domain});
    }
    return bonds;
  }
  const int period = spec.inner + 1;
  for (int s = 1; s < L; ++s) {
    const int domain = (s + period - 1) / period;
    const int position = s - (domain - 1) * period;
    const bool weak = spec.kind == ModelKind::SSH && position % 2 == 1;
    if (spec.split_ends && (s == 1 || s == L - 1)) {
      for (Leg leg : {Leg::A, Leg::B}) {
        const Index a = s == 1 ? chain_site(spec, 1, leg) : chain_site(spec, s);
        const Index b = s == 1 ? chain_site(spec, 2) : chain_site(spec, L, leg);
        bonds.push_back({a, b, BondRole::Chain, s, leg, weak, domain});
      }
      continue;
    }
    bonds.push_back({chain_site(spec, s), chain_site(spec, s + 1), BondRole::Chain, s, Leg::A, weak, domain});
  }
  return bonds;
}

}  // namespace dwall
