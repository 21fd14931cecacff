#pragma once

#include "dwall/effective.hpp"
#include "dwall/propagate.hpp"

#include <functional>
#include <vector>

namespace dwall {

// A stretch of a protocol. Controls are given in segment-local time tau.
struct Segment {
  double duration = 0.0;
  std::function<ControlVector(double tau)> controls;
  bool constant = false;
};

struct Program {
  std::vector<Segment> segments;
  double duration() const;
  ControlVector controls_at(double t) const;
};

// prefix, a constant plateau of free length, suffix. Total time T maps to a
// plateau of T - fixed_duration().
struct PlateauProgram {
  std::vector<Segment> prefix;
  ControlVector plateau;
  std::vector<Segment> suffix;

  double fixed_duration() const;
  Program with_total(double total) const;
};

using ControlsToHamiltonian = std::function<ComplexMatrix(const ControlVector&)>;
ControlsToHamiltonian lattice_hamiltonian(const LatticeSpec& spec, const DisorderRealization& disorder = {});

using ProgramObserver = std::function<void(double t, const StateVector& psi, const ControlVector& controls)>;

// Steps through every segment; constant segments are propagated in one shot
// unless an observer needs the intermediate states.
StateVector run_program(const Program& program, const ControlsToHamiltonian& hamiltonian, StateVector psi,
                        double dt, const ProgramObserver& observer = {});

// <target|psi(T)> for every total time T = fixed_duration + m*dt at the cost of
// one pass over the prefix and suffix.
class PlateauScan {
 public:
  PlateauScan(const PlateauProgram& program, const ControlsToHamiltonian& hamiltonian, const StateVector& psi0,
              const StateVector& target, double dt);

  double start_time() const { return start_; }
  Complex amplitude(double total) const;
  double fidelity(double total) const { return std::norm(amplitude(total)); }
  // Calls visit(T, amplitude) for T = start, start + dt, ... while visit returns true and T <= t_end.
  void sweep(double t_end, const std::function<bool(double, Complex)>& visit) const;

 private:
  double start_ = 0.0;
  double dt_ = 0.1;
  RealVector energies_;
  StateVector weights_;
};

struct TimeSearch {
  double f0 = 0.995;
  double t_min = 0.0;
  double t_max = 1e4;
  double dt = 0.1;
};

struct OptimalTime {
  double t_tr = 0.0;     // first grid time with fidelity >= f0
  double fidelity = 0.0;
  double t_peak = 0.0;   // local maximum that follows t_tr
  double peak_fidelity = 0.0;
};

// Coarse-to-fine search (strides 10, 1, 0.1) for expensive fidelity closures.
OptimalTime find_optimal_time(const std::function<double(double)>& fidelity_at, const TimeSearch& search);
// Dense search on the dt grid using the plateau decomposition.
OptimalTime find_optimal_time(const PlateauScan& scan, const TimeSearch& search);

struct OccupationSample {
  double t = 0.0;
  RealVector rungs;
  RealVector topological;
};

struct Timing {
  double t_tr = 0.0;
  double dt = 0.1;
  double wall_clock = 0.0;
};

struct ProtocolResult {
  StateVector final_state;
  StateVector target;
  double fidelity = 0.0;
  Complex amplitude = 0.0;
  double acquired_phase = 0.0;
  std::vector<OccupationSample> occupations;
  Timing timing;
};

struct RunOptions {
  double dt = 0.1;
  bool record = false;                    // rung occupations every step
  std::vector<StateVector> watch;         // fixed states whose occupations are recorded
  bool watch_chain = false;               // also record hybridized chain states at the current controls
  std::optional<StateVector> initial;     // default: protocol source state
  std::optional<StateVector> target;      // default: protocol target state
};

PlateauProgram lr_program(const LatticeSpec& spec, const ProtocolPlan& plan);
ProtocolResult run_lr_transfer(const LatticeSpec& spec, const ProtocolPlan& plan,
                               const DisorderRealization& disorder = {}, const RunOptions& options = {});

// Transfer between |L> (|R>) and the wall state S_k. The barrier domain is k+1
// for transfers from the left end and k for transfers from the right end.
PlateauProgram ls_program(const LatticeSpec& spec, int k, const ProtocolPlan& plan, const BarrierPlan& barrier);
ProtocolResult run_ls_transfer(const LatticeSpec& spec, int k, const ProtocolPlan& plan, const BarrierPlan& barrier,
                               const DisorderRealization& disorder = {}, const RunOptions& options = {});

Program trivial_program(const LatticeSpec& spec, double mu0, double t_tr);
ProtocolResult run_trivial_transfer(const LatticeSpec& spec, double mu0, double t_tr,
                                    const DisorderRealization& disorder = {}, const RunOptions& options = {});

struct SuperpositionPlan {
  std::vector<double> stage_controls{1.0, 0.97, 0.97, 0.97, 1.0};  // outer-to-outer, five transfer domains
  double t_prep = 30.0;
  double barrier_t_prep = 30.0;
  double barrier_height = 20.0;
  double total_time = 391.4;
};
Program superposition_program(const LatticeSpec& spec, const SuperpositionPlan& plan);
ProtocolResult run_superposition_transfer(const LatticeSpec& spec, const SuperpositionPlan& plan,
                                          const DisorderRealization& disorder = {}, const RunOptions& options = {});

// Two-site-ended transmission line: the a and b end components are moved one after the other,
// the waiting pair detached from the line.
Program superposition_line_program(const LatticeSpec& spec, double mu0, double total_time);
ProtocolResult run_superposition_line(const LatticeSpec& spec, double mu0, double total_time,
                                      const DisorderRealization& disorder = {}, const RunOptions& options = {});

ProtocolResult run_state_preparation(const LatticeSpec& spec, SiteIndex start, double ramp_time,
                                     const RunOptions& options = {});

}  // namespace dwall
