#include "dwall/disorder.hpp"

#include <cmath>

namespace dwall {

std::string to_string(DisorderKind kind) {
  switch (kind) {
    case DisorderKind::None: return "none";
    case DisorderKind::SymmetryPreserving: return "symmetry-preserving";
    case DisorderKind::General: return "general";
  }
  return "unknown";
}

DisorderKind disorder_kind_from_string(const std::string& name) {
  if (name == "none") return DisorderKind::None;
  if (name == "symmetry-preserving" || name == "sp" || name == "chiral") return DisorderKind::SymmetryPreserving;
  if (name == "general") return DisorderKind::General;
  throw ValidationError("unknown disorder kind '" + name + "'");
}

std::uint64_t RandomStream::derive(std::uint64_t master, std::uint64_t index) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return splitmix(master ^ splitmix(index));
}

double RandomStream::centered() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53 - 0.5;
}

double DisorderRealization::bond_magnitude(std::size_t bond, double base) const {
  if (pristine()) return base;
  return std::abs(base + bond_strength * bond_noise.at(bond));
}

double DisorderRealization::site_shift(Index site) const {
  if (pristine() || site_noise.empty()) return 0.0;
  return onsite_strength * site_noise.at(static_cast<std::size_t>(site));
}

DisorderRealization sample_disorder(const LatticeSpec& spec, DisorderKind kind, double bond_strength,
                                    double onsite_strength, std::uint64_t seed) {
  spec.validate();
  if (bond_strength < 0.0 || onsite_strength < 0.0)
    throw ValidationError("disorder strengths must be non-negative");
  DisorderRealization d;
  d.kind = kind;
  d.bond_strength = bond_strength;
  d.onsite_strength = onsite_strength;
  d.seed = seed;
  if (kind == DisorderKind::None) return d;

  const auto bonds = lattice_bonds(spec);
  d.bond_noise.assign(bonds.size(), 0.0);
  RandomStream rng(seed);
  if (kind == DisorderKind::SymmetryPreserving) {
    if (spec.is_ladder()) {
      std::vector<double> per_step(static_cast<std::size_t>(spec.length()), 0.0);
      for (int j = 1; j < spec.length(); ++j) per_step[static_cast<std::size_t>(j)] = rng.centered();
      for (std::size_t b = 0; b < bonds.size(); ++b)
        if (bonds[b].role != BondRole::Vertical)
          d.bond_noise[b] = per_step[static_cast<std::size_t>(bonds[b].step)];
    } else {
      for (double& r : d.bond_noise) r = rng.centered();
    }
    return d;
  }
  for (double& r : d.bond_noise) r = rng.centered();
  d.site_noise.assign(static_cast<std::size_t>(spec.site_count()), 0.0);
  for (double& r : d.site_noise) r = rng.centered();
  return d;
}

}  // namespace dwall
