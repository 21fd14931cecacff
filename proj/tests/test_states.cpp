#include "dwall/states.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace dwall;

namespace {

Complex at(const StateVector& psi, int j, Leg leg) { return psi(flat_index(j, leg)); }

double rung_weight(const StateVector& psi, int j) {
  return std::norm(at(psi, j, Leg::A)) + std::norm(at(psi, j, Leg::B));
}

// sqrt(2 - 2|P psi|) with P the projector on the n eigenvectors closest to zero energy.
double projected_distance(const StateVector& psi, const ComplexMatrix& H, Index n) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
  std::vector<Index> order(static_cast<std::size_t>(H.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return std::abs(es.eigenvalues()(a)) < std::abs(es.eigenvalues()(b)); });
  double w = 0.0;
  for (Index i = 0; i < n; ++i) w += std::norm(es.eigenvectors().col(order[i]).dot(psi));
  return std::sqrt(2.0 - 2.0 * std::sqrt(w));
}

}  // namespace

TEST_CASE("compact left state gauge and chirality") {
  const auto spec = LatticeSpec::creutz(2, 4);
  const StateVector L = compact_state(BoundaryStateId::left(), spec);
  CHECK(std::abs(at(L, 1, Leg::A) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(at(L, 1, Leg::B) - Complex(0.0, -1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(L.norm() == doctest::Approx(1.0));
  const ComplexMatrix X = chiral_operator(spec);
  CHECK((X * L + L).norm() < 1e-15);
  const StateVector R = compact_state(BoundaryStateId::right(), spec);
  CHECK((X * R - chirality(BoundaryStateId::right(), spec) * R).norm() < 1e-15);
  CHECK(chirality(BoundaryStateId::s(1), spec) == 1);
  CHECK(chirality(BoundaryStateId::s(2), spec) == -1);
}

TEST_CASE("compact states are exact zero modes of the balanced ladder") {
  for (int N : {1, 2, 3}) {
    const auto spec = LatticeSpec::creutz(N, 4);
    const auto h = assemble_hamiltonian(spec, ControlVector::uniform(N, 0.0));
    std::vector<BoundaryStateId> ids{BoundaryStateId::left(), BoundaryStateId::right()};
    for (int k = 1; k < N; ++k) {
      ids.push_back(BoundaryStateId::s(k));
      ids.push_back(BoundaryStateId::p(k));
    }
    for (const auto& id : ids) {
      const StateVector psi = compact_state(id, spec);
      CHECK(psi.norm() == doctest::Approx(1.0));
      CHECK((h.entries * psi).norm() < 1e-14);
    }
  }
}

TEST_CASE("P state sits on the two rungs next to its wall") {
  const auto spec = LatticeSpec::creutz(2, 4);
  const StateVector P = compact_state(BoundaryStateId::p(1), spec);
  const int jk = wall_position(spec, 1);
  CHECK(rung_weight(P, jk - 1) == doctest::Approx(0.5));
  CHECK(rung_weight(P, jk + 1) == doctest::Approx(0.5));
  CHECK(rung_weight(P, jk) == doctest::Approx(0.0));
  CHECK(std::abs(P.dot(compact_state(BoundaryStateId::s(1), spec))) < 1e-15);
}

TEST_CASE("hybridized left state solves the bulk equations of its domain") {
  for (double eps : {0.5, 1.0, 1.5}) {
    const auto spec = LatticeSpec::creutz(2, 4);
    const auto c = ControlVector::uniform(2, eps);
    const StateVector L = hybridized_state(BoundaryStateId::left(), spec, c);
    const StateVector r = assemble_hamiltonian(spec, c).entries * L;
    double interior = 0.0;
    for (int j = 1; j <= spec.inner; ++j) interior += rung_weight(r, j);
    CHECK(std::sqrt(interior) < 1e-12);
    // weight decays by |2J/eps|^-2 per rung
    const double ratio = rung_weight(L, 2) / rung_weight(L, 1);
    CHECK(ratio == doctest::Approx(std::pow(eps / 2.0, 2)).epsilon(1e-10));
  }
}

TEST_CASE("hybridized states stay inside the protected subspace") {
  struct Case {
    double eps;
    double tol_left;
    double tol_p;
  };
  for (const Case& cs : {Case{1.0, 0.06, 0.12}, Case{0.5, 0.003, 0.01}}) {
    const auto spec = LatticeSpec::creutz(2, 4);
    const auto c = ControlVector::uniform(2, cs.eps);
    const auto h = assemble_hamiltonian(spec, c);
    const StateVector L = hybridized_state(BoundaryStateId::left(), spec, c);
    const StateVector P = hybridized_state(BoundaryStateId::p(1), spec, c);
    CHECK(state_deviation(L, h) == doctest::Approx(projected_distance(L, h.entries, 4)).epsilon(1e-8));
    CHECK(state_deviation(L, h) < cs.tol_left);
    CHECK(state_deviation(P, h) < cs.tol_p);
  }
  const auto ssh = LatticeSpec::ssh(2, 4);
  const auto c = ControlVector::uniform(2, 0.5);
  const auto h = assemble_hamiltonian(ssh, c);
  const StateVector L = hybridized_state(BoundaryStateId::left(), ssh, c);
  CHECK(state_deviation(L, h) == doctest::Approx(projected_distance(L, h.entries, 3)).epsilon(1e-8));
  CHECK(state_deviation(L, h) < 0.12);
  CHECK(state_deviation(hybridized_state(BoundaryStateId::s(1), ssh, c), h) < 0.15);
}

TEST_CASE("SSH end state lives on odd sites with ratio -v/w") {
  const auto spec = LatticeSpec::ssh(1, 6);
  const StateVector L = hybridized_state(BoundaryStateId::left(), spec, 0.5);
  CHECK(std::abs(L(1)) < 1e-15);
  CHECK(std::abs(L(3)) < 1e-15);
  CHECK((L(2) / L(0)).real() == doctest::Approx(-0.5));
  CHECK((L(4) / L(2)).real() == doctest::Approx(-0.5));
}

TEST_CASE("chain labels and states") {
  const auto cl = LatticeSpec::creutz(3, 4);
  const auto labels = chain_labels(cl);
  REQUIRE(labels.size() == 4u);
  CHECK(labels.front().kind == StateKind::Left);
  CHECK(labels[1].kind == StateKind::P);
  CHECK(labels[2].k == 2);
  CHECK(labels.back().kind == StateKind::Right);
  CHECK(chain_states(cl, ControlVector::uniform(3, 1.0)).size() == 4u);
  CHECK(chain_labels(LatticeSpec::ssh(3, 4))[1].kind == StateKind::S);
}

TEST_CASE("bad state requests") {
  const auto spec = LatticeSpec::creutz(2, 4);
  CHECK_THROWS_AS(compact_state(BoundaryStateId::s(2), spec), IndexError);
  CHECK_THROWS_AS(compact_state(BoundaryStateId::p(0), spec), IndexError);
  CHECK_THROWS_AS(compact_state(BoundaryStateId::p(1), LatticeSpec::ssh(2, 4)), CapabilityError);
  CHECK_THROWS_AS(compact_state(BoundaryStateId::left(), LatticeSpec::trivial_chain(5)), CapabilityError);
  CHECK_THROWS_AS(hybridized_state(BoundaryStateId::left(), spec, ControlVector::uniform(3, 1.0)), ValidationError);
}
