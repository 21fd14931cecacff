#include "dwall/hamiltonian.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dwall;

namespace {

// Straightforward rebuild of the ladder and chain Hamiltonians, rung by rung.
ComplexMatrix reference_ladder(int N, int ell, const std::vector<double>& eps, double J, double m_runged = -1.0) {
  const int L = N * (ell + 1) + 1;
  ComplexMatrix H = ComplexMatrix::Zero(2 * L, 2 * L);
  auto idx = [](int j, int s) { return 2 * (j - 1) + s; };
  auto control = [&](int j) {
    if ((j - 1) % (ell + 1) != 0) return eps[(j - 2) / (ell + 1)];
    if (j == 1) return eps.front();
    if (j == L) return eps.back();
    return 0.0;
  };
  for (int j = 1; j < L; ++j) {
    const int plaquette_domain = (j - 1) / (ell + 1) + 1;
    const double phi = plaquette_domain % 2 ? kPi : -kPi;
    for (int s = 0; s < 2; ++s) {
      const double sign = s == 0 ? 1.0 : -1.0;
      H(idx(j + 1, s), idx(j, s)) = -J * std::polar(1.0, sign * phi / 2.0);
      H(idx(j + 1, 1 - s), idx(j, s)) = -J;
    }
  }
  H = (H + H.adjoint()).eval();
  for (int j = 1; j <= L; ++j) {
    if (m_runged < 0.0) {
      H(idx(j, 0), idx(j, 0)) = control(j);
      H(idx(j, 1), idx(j, 1)) = -control(j);
    } else {
      H(idx(j, 0), idx(j, 1)) = H(idx(j, 1), idx(j, 0)) = -control(j);
    }
  }
  return H;
}

ComplexMatrix reference_ssh(int N, int ell, const std::vector<double>& v, double w) {
  const int L = N * (ell + 1) + 1;
  ComplexMatrix H = ComplexMatrix::Zero(L, L);
  for (int s = 1; s < L; ++s) {
    const int d = (s - 1) / (ell + 1) + 1;
    const int position = s - (d - 1) * (ell + 1);
    const double t = position % 2 ? v[d - 1] : w;
    H(s, s - 1) = H(s - 1, s) = -t;
  }
  return H;
}

ControlVector controls(std::vector<double> v) {
  ControlVector c;
  c.per_domain = std::move(v);
  return c;
}

}  // namespace

TEST_CASE("imbalanced ladder matches the reference builder") {
  const std::vector<double> eps{0.3, 0.5, 0.7};
  const auto h = assemble_hamiltonian(LatticeSpec::creutz(3, 2), controls(eps));
  CHECK((h.entries - reference_ladder(3, 2, eps, 1.0)).cwiseAbs().maxCoeff() < 1e-14);
  const auto h2 = assemble_hamiltonian(LatticeSpec::creutz(2, 4, 0.8), controls({1.0, 1.0}));
  CHECK((h2.entries - reference_ladder(2, 4, {1.0, 1.0}, 0.8)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("runged ladder matches the reference builder") {
  const std::vector<double> m{0.9, 1.1};
  const auto h = assemble_hamiltonian(LatticeSpec::runged(2, 4), controls(m));
  CHECK((h.entries - reference_ladder(2, 4, m, 1.0, 1.0)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("SSH chain matches the reference builder") {
  const std::vector<double> v{0.5, 0.56, 0.5};
  const auto h = assemble_hamiltonian(LatticeSpec::ssh(3, 4), controls(v));
  CHECK((h.entries - reference_ssh(3, 4, v, 1.0)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("trivial chain spectrum is the cosine band") {
  const int L = 13;
  const auto h = assemble_hamiltonian(LatticeSpec::trivial_chain(L), {});
  RealVector e = spectrum(h);
  std::vector<double> expected;
  for (int n = 1; n <= L; ++n) expected.push_back(-2.0 * std::cos(n * kPi / (L + 1)));
  std::sort(expected.begin(), expected.end());
  for (int n = 0; n < L; ++n) CHECK(e(n) == doctest::Approx(expected[n]).epsilon(1e-12));
}

TEST_CASE("Hamiltonians are Hermitian, also with disorder and extra terms") {
  const auto spec = LatticeSpec::creutz(4, 2);
  auto c = ControlVector::uniform(4, 1.0);
  c.onsite[3] = 0.4;
  c.bond_scale[5] = 0.3;
  c.wall_overrides[2] = 2.0;
  const auto d = sample_disorder(spec, DisorderKind::General, 0.2, 0.2, 5);
  CHECK(assemble_hamiltonian(spec, c, d).hermiticity_error() < 1e-15);
  CHECK_THROWS_AS(assemble_hamiltonian(spec, ControlVector::uniform(3, 1.0)), ValidationError);
}

TEST_CASE("chiral symmetry") {
  for (const auto& spec : {LatticeSpec::creutz(3, 4), LatticeSpec::runged(2, 2), LatticeSpec::ssh(3, 4)}) {
    const ComplexMatrix X = chiral_operator(spec);
    CHECK((X * X - ComplexMatrix::Identity(X.rows(), X.cols())).cwiseAbs().maxCoeff() < 1e-15);
    const auto c = spec.kind == ModelKind::SSH ? controls({0.5, 0.6, 0.5}) : ControlVector::uniform(spec.domains, 0.8);
    CHECK(chiral_anticommutator_norm(X, assemble_hamiltonian(spec, c)) < 1e-14);
    const auto sp = sample_disorder(spec, DisorderKind::SymmetryPreserving, 0.3, 0.0, 2);
    CHECK(chiral_anticommutator_norm(X, assemble_hamiltonian(spec, c, sp)) < 1e-14);
    const auto general = sample_disorder(spec, DisorderKind::General, 0.3, 0.3, 2);
    CHECK(chiral_anticommutator_norm(X, assemble_hamiltonian(spec, c, general)) > 1e-3);
  }
  CHECK_THROWS_AS(chiral_operator(LatticeSpec::trivial_chain(5)), CapabilityError);
}

TEST_CASE("winding numbers") {
  CHECK(winding_number(1.0, kPi, ModelKind::CreutzImbalanced) == 1);
  CHECK(winding_number(3.0, kPi, ModelKind::CreutzImbalanced) == 0);
  CHECK(winding_number(1.0, -kPi, ModelKind::CreutzImbalanced) == -1);
  CHECK(winding_number(1.0, kPi, ModelKind::CreutzRunged) == 1);
  CHECK(winding_number(0.5, 0.0, ModelKind::SSH) == 1);
  CHECK(winding_number(1.5, 0.0, ModelKind::SSH) == 0);
  CHECK_THROWS_AS(winding_number(2.0, kPi, ModelKind::CreutzImbalanced), SingularError);
  CHECK_THROWS_AS(winding_number(1.0, 0.0, ModelKind::TrivialChain), CapabilityError);
}

TEST_CASE("zero-mode census") {
  for (int N : {1, 2, 4}) {
    const auto h = assemble_hamiltonian(LatticeSpec::creutz(N, 4), ControlVector::uniform(N, 0.0));
    CHECK(count_zero_modes(h, 1e-10) == 2 * N);
  }
  const auto ssh = assemble_hamiltonian(LatticeSpec::ssh(4, 2), ControlVector::uniform(4, 0.0));
  CHECK(count_zero_modes(ssh, 1e-10) == 5);
}
