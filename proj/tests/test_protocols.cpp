#include "dwall/analysis.hpp"

#include <doctest.h>

using namespace dwall;

namespace {

ProtocolPlan two_domain_plan(double t_tr) {
  ProtocolPlan plan;
  plan.controls = ControlVector::uniform(2, 1.0);
  plan.t_prep = 30.0;
  plan.t_tr = t_tr;
  return plan;
}

}  // namespace

TEST_CASE("plateau scan equals a direct run") {
  const auto spec = LatticeSpec::creutz(2, 4);
  const auto plan = two_domain_plan(0.0);
  const PlateauScan scan(lr_program(spec, plan), lattice_hamiltonian(spec), compact_state(BoundaryStateId::left(), spec),
                         compact_state(BoundaryStateId::right(), spec), 0.1);
  CHECK(scan.start_time() == doctest::Approx(60.0));
  for (double T : {80.0, 111.2, 150.3}) {
    const ProtocolResult r = run_lr_transfer(spec, two_domain_plan(T));
    CHECK(std::abs(scan.amplitude(T) - r.amplitude) < 1e-9);
  }
}

TEST_CASE("closure search on a known curve") {
  // f = sin^2(pi t / 200): first crossing of f0 at (200/pi) asin(sqrt f0), peak at 100
  auto f = [](double t) { return std::pow(std::sin(kPi * t / 200.0), 2); };
  const double f0 = 0.995;
  const double t_star = 200.0 / kPi * std::asin(std::sqrt(f0));
  const OptimalTime o = find_optimal_time(f, {f0, 0.0, 400.0, 0.1});
  CHECK(o.t_tr == doctest::Approx(std::ceil(t_star / 0.1) * 0.1).epsilon(1e-9));
  CHECK(o.fidelity >= f0);
  CHECK(o.t_peak == doctest::Approx(100.0).epsilon(1e-9));
  try {
    find_optimal_time([](double t) { return 0.5 * std::pow(std::sin(t / 10.0), 2); }, {f0, 0.0, 100.0, 0.1});
    FAIL("expected NotFoundError");
  } catch (const NotFoundError& e) {
    CHECK(e.best_fidelity == doctest::Approx(0.5).epsilon(1e-3));
  }
}

TEST_CASE("closure and scan searches agree") {
  const auto spec = LatticeSpec::creutz(2, 4);
  const PlateauScan scan(lr_program(spec, two_domain_plan(0.0)), lattice_hamiltonian(spec),
                         compact_state(BoundaryStateId::left(), spec), compact_state(BoundaryStateId::right(), spec), 0.1);
  const OptimalTime a = find_optimal_time(scan, {0.995, 0.0, 400.0, 0.1});
  const OptimalTime b = find_optimal_time([&](double T) { return scan.fidelity(T); }, {0.995, 60.0, 400.0, 0.1});
  CHECK(a.t_tr == doctest::Approx(b.t_tr));
  CHECK(a.t_peak == doctest::Approx(b.t_peak));
  CHECK(a.t_tr <= a.t_peak);
}

TEST_CASE("left-to-right transfer works both ways") {
  const auto spec = LatticeSpec::creutz(2, 4);
  const auto plan = two_domain_plan(111.2);
  const ProtocolResult forward = run_lr_transfer(spec, plan);
  CHECK(forward.fidelity >= 0.995);
  CHECK(forward.final_state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  RunOptions back;
  back.initial = compact_state(BoundaryStateId::right(), spec);
  back.target = compact_state(BoundaryStateId::left(), spec);
  CHECK(run_lr_transfer(spec, plan, {}, back).fidelity == doctest::Approx(forward.fidelity).epsilon(1e-9));
}

TEST_CASE("halving the time step barely changes the fidelity") {
  const auto spec = LatticeSpec::creutz(2, 4);
  const auto plan = two_domain_plan(111.2);
  RunOptions fine;
  fine.dt = 0.05;
  CHECK(std::abs(run_lr_transfer(spec, plan).fidelity - run_lr_transfer(spec, plan, {}, fine).fidelity) < 1e-4);
}

TEST_CASE("recorded occupations are normalised") {
  const auto spec = LatticeSpec::creutz(2, 4);
  RunOptions o;
  o.record = true;
  const ProtocolResult r = run_lr_transfer(spec, two_domain_plan(111.2), {}, o);
  REQUIRE(r.occupations.size() > 1000u);
  for (const auto& s : r.occupations) CHECK(s.rungs.sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.occupations.front().rungs(0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.occupations.back().rungs(spec.length() - 1) > 0.99);
}

TEST_CASE("left to wall transfer with a barrier") {
  const auto spec = LatticeSpec::creutz(2, 4);
  ProtocolPlan plan = two_domain_plan(0.0);
  const BarrierPlan barrier{2, 20.0, 30.0};
  const PlateauScan scan(ls_program(spec, 1, plan, barrier), lattice_hamiltonian(spec),
                         compact_state(BoundaryStateId::left(), spec), compact_state(BoundaryStateId::s(1), spec), 0.1);
  const OptimalTime o = find_optimal_time(scan, {0.995, 0.0, 1000.0, 0.1});
  plan.t_tr = o.t_tr - 2.0 * barrier.t_prep;
  const ProtocolResult r = run_ls_transfer(spec, 1, plan, barrier);
  CHECK(r.fidelity >= 0.995);
  CHECK_THROWS_AS(run_ls_transfer(spec, 1, plan, {2, 1.5, 30.0}), ValidationError);
  CHECK_THROWS_AS(run_ls_transfer(spec, 1, plan, {3, 20.0, 30.0}), ValidationError);
  CHECK_THROWS_AS(run_ls_transfer(spec, 2, plan, barrier), IndexError);
}

TEST_CASE("trivial chain wells") {
  const auto spec = LatticeSpec::trivial_chain(7);
  const ProtocolResult shallow = run_trivial_transfer(spec, 10.0, 100.0);
  CHECK(shallow.final_state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // very deep wells detune the ends from the band and block the transfer
  CHECK(run_trivial_transfer(spec, 1e4, 100.0).fidelity < 1e-3);
  CHECK_THROWS_AS(run_trivial_transfer(spec, 0.0, 100.0), ValidationError);
  CHECK_THROWS_AS(run_trivial_transfer(LatticeSpec::creutz(1, 4), 10.0, 100.0), CapabilityError);
}

TEST_CASE("state preparation") {
  const auto spec = LatticeSpec::creutz(2, 4);
  CHECK(run_state_preparation(spec, {1, Leg::A}, 0.0).fidelity == doctest::Approx(0.5));
  for (int j : {1, 6, 11})
    for (Leg leg : {Leg::A, Leg::B}) CHECK(run_state_preparation(spec, {j, leg}, 60.0).fidelity >= 0.99);
  CHECK_THROWS_AS(run_state_preparation(spec, {3, Leg::A}, 60.0), ValidationError);
}

TEST_CASE("programs") {
  const auto spec = LatticeSpec::creutz(2, 4);
  const PlateauProgram pp = lr_program(spec, two_domain_plan(0.0));
  CHECK(pp.fixed_duration() == doctest::Approx(60.0));
  const Program p = pp.with_total(100.0);
  CHECK(p.duration() == doctest::Approx(100.0));
  CHECK(p.controls_at(50.0).per_domain[0] == doctest::Approx(1.0));
  CHECK(p.controls_at(0.0).per_domain[0] == doctest::Approx(0.0));
  CHECK_THROWS_AS(pp.with_total(40.0), ValidationError);
  CHECK_THROWS_AS(run_lr_transfer(spec, [] {
                    ProtocolPlan q;
                    q.controls = ControlVector::uniform(3, 1.0);
                    q.t_tr = 100.0;
                    return q;
                  }()),
                  ValidationError);
}
