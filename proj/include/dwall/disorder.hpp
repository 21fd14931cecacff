#pragma once

#include "dwall/lattice.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace dwall {

enum class DisorderKind { None, SymmetryPreserving, General };

std::string to_string(DisorderKind kind);
DisorderKind disorder_kind_from_string(const std::string& name);

// Seeded 64-bit stream. Substreams are derived with SplitMix64 so that
// realization m of a sweep depends only on (master seed, m).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index);
  // Uniform draw in [-0.5, 0.5).
  double centered();

 private:
  std::mt19937_64 engine_;
};

struct DisorderRealization {
  DisorderKind kind = DisorderKind::None;
  double bond_strength = 0.0;   // dJ
  double onsite_strength = 0.0; // dmu
  std::vector<double> bond_noise;  // one entry per lattice bond, in lattice_bonds order
  std::vector<double> site_noise;  // one entry per flat site
  std::uint64_t seed = 0;

  bool pristine() const { return kind == DisorderKind::None; }
  // |base + dJ R| for bond b; base itself when pristine.
  double bond_magnitude(std::size_t bond, double base) const;
  double site_shift(Index site) const;
};

DisorderRealization sample_disorder(const LatticeSpec& spec, DisorderKind kind, double bond_strength,
                                    double onsite_strength, std::uint64_t seed);

}  // namespace dwall
