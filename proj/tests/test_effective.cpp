#include "dwall/effective.hpp"

#include <doctest.h>

using namespace dwall;

TEST_CASE("single-domain coupling reproduces the closed-form time") {
  for (int ell : {2, 4, 6})
    for (double eps : {0.25, 0.5, 1.0, 1.5}) {
      const auto spec = LatticeSpec::creutz(1, ell);
      const auto chain = effective_couplings(spec, ControlVector::uniform(1, eps));
      REQUIRE(chain.couplings.size() == 1u);
      const double t = kPi / (2.0 * std::abs(chain.couplings[0]));
      CHECK(t == doctest::Approx(predict_transfer_time(spec, eps)).epsilon(1e-12));
    }
}

TEST_CASE("two-domain chain transfers at pi / (sqrt2 |v|)") {
  for (int ell : {2, 4})
    for (double eps : {0.5, 1.0}) {
      const auto spec = LatticeSpec::creutz(2, ell);
      const auto chain = effective_couplings(spec, ControlVector::uniform(2, eps));
      REQUIRE(chain.couplings.size() == 2u);
      CHECK(std::abs(chain.couplings[0]) == doctest::Approx(std::abs(chain.couplings[1])));
      const double t = kPi / (std::sqrt(2.0) * std::abs(chain.couplings[0]));
      CHECK(t == doctest::Approx(predict_transfer_time(spec, eps)).epsilon(1e-12));
      // three-level chain with equal couplings: |R|^2 = sin^4(|v| t / sqrt2)
      StateVector psi0 = StateVector::Zero(3);
      psi0(0) = 1.0;
      const auto occ = effective_evolve(chain, psi0, {t / 2.0, t});
      const double x = std::abs(chain.couplings[0]) * t / 2.0 / std::sqrt(2.0);
      CHECK(occ[0](2) == doctest::Approx(std::pow(std::sin(x), 4)).epsilon(1e-9));
      CHECK(occ[1](2) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("single-domain Rabi oscillation") {
  const auto spec = LatticeSpec::creutz(1, 4);
  const auto chain = effective_couplings(spec, ControlVector::uniform(1, 1.0));
  const double v = std::abs(chain.couplings[0]);
  StateVector psi0 = StateVector::Zero(2);
  psi0(0) = 1.0;
  const std::vector<double> times{10.0, 50.0, 133.0};
  const auto occ = effective_evolve(chain, psi0, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(occ[i](1) == doctest::Approx(std::pow(std::sin(v * times[i]), 2)).epsilon(1e-10));
}

TEST_CASE("couplings agree with lattice matrix elements") {
  const auto spec = LatticeSpec::creutz(3, 4);
  const auto c = ControlVector::mirrored(3, std::vector<double>{1.0, 0.952});
  const auto chain = effective_couplings(spec, c);
  const auto states = chain_states(spec, c);
  const ComplexMatrix H = assemble_hamiltonian(spec, c).entries;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const Complex direct = states[k].dot(H * states[k - 1]);
    CHECK(std::abs(chain.couplings[k - 1] - direct) < 0.005 * std::abs(direct));
  }
  const auto ssh = LatticeSpec::ssh(2, 4);
  const auto cs = ControlVector::uniform(2, 0.5);
  const auto schain = effective_couplings(ssh, cs);
  const auto sstates = chain_states(ssh, cs);
  const ComplexMatrix Hs = assemble_hamiltonian(ssh, cs).entries;
  for (std::size_t k = 1; k < sstates.size(); ++k) {
    const Complex direct = sstates[k].dot(Hs * sstates[k - 1]);
    CHECK(std::abs(schain.couplings[k - 1] - direct) < 0.05 * std::abs(direct));
  }
}

TEST_CASE("runged and imbalanced couplings have equal magnitude") {
  for (int N : {1, 2, 3}) {
    const auto c = ControlVector::uniform(N, 1.0);
    const auto a = effective_couplings(LatticeSpec::creutz(N, 4), c);
    const auto b = effective_couplings(LatticeSpec::runged(N, 4), c);
    for (std::size_t k = 0; k < a.couplings.size(); ++k)
      CHECK(std::abs(a.couplings[k]) == doctest::Approx(std::abs(b.couplings[k])).epsilon(1e-12));
  }
}

TEST_CASE("closed-form values") {
  CHECK(localization_length(1.0) == doctest::Approx(3.3219).epsilon(1e-4));
  CHECK(localization_length(0.2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(predict_transfer_time(LatticeSpec::ssh(1, 4), 0.5) == doctest::Approx(16.755).epsilon(1e-4));
  // pi e / (2(4 - e^2)) (2/e)^(l+3) at e = 1, l = 6
  CHECK(predict_transfer_time(LatticeSpec::creutz(1, 6), 1.0) == doctest::Approx(kPi / 6.0 * 512.0));
  CHECK_THROWS_AS(predict_transfer_time(LatticeSpec::creutz(3, 4), 1.0), CapabilityError);
  CHECK_THROWS_AS(predict_transfer_time(LatticeSpec::creutz(1, 4), 2.5), ValidationError);
  CHECK_THROWS_AS(localization_length(2.0), ValidationError);
  CHECK(default_t_prep(LatticeSpec::ssh(2, 4)) == 15.0);
  CHECK(default_t_prep(LatticeSpec::creutz(2, 4)) == 30.0);
}

TEST_CASE("pulsed effective evolution conserves the norm") {
  const auto spec = LatticeSpec::creutz(2, 4);
  ProtocolPlan plan;
  plan.controls = ControlVector::uniform(2, 1.0);
  plan.t_tr = 111.2;
  StateVector psi0 = StateVector::Zero(3);
  psi0(0) = 1.0;
  const auto traj = effective_evolve(spec, plan, psi0);
  CHECK(traj.final_state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(traj.occupations.back()(2) > 0.99);
}

TEST_CASE("optimizer finds the three-domain central control") {
  const auto spec = LatticeSpec::creutz(3, 4);
  const OptimizedPlan best = optimize_controls(spec, 1.0);
  REQUIRE(best.plan.controls.per_domain.size() == 3u);
  CHECK(best.plan.controls.per_domain[0] == 1.0);
  CHECK(std::abs(best.plan.controls.per_domain[1] - 0.952) <= 0.01);
  CHECK(best.fidelity >= 0.995);
  CHECK(best.peak_fidelity >= best.fidelity);
  CHECK_THROWS_AS(optimize_controls(LatticeSpec::creutz(2, 4), 1.0), ValidationError);
}
