#pragma once

#include "dwall/pulse.hpp"
#include "dwall/states.hpp"

#include <vector>

namespace dwall {

// Tridiagonal chain of protected states. couplings[k-1] = <state_k|H|state_{k-1}>.
struct EffectiveChain {
  std::vector<Complex> couplings;
  std::vector<BoundaryStateId> labels;

  Index size() const { return static_cast<Index>(labels.size()); }
  ComplexMatrix hamiltonian() const;
};

EffectiveChain effective_couplings(const LatticeSpec& spec, const ControlVector& controls);

// Occupations |psi_k(t)|^2 of a static chain at the requested times.
std::vector<RealVector> effective_evolve(const EffectiveChain& chain, const StateVector& psi0,
                                         const std::vector<double>& times);

struct EffectiveTrajectory {
  std::vector<double> times;
  std::vector<RealVector> occupations;
  StateVector final_state;
};

// Chain evolution with couplings following the transfer pulse of plan, sampled every step.
EffectiveTrajectory effective_evolve(const LatticeSpec& spec, const ProtocolPlan& plan, const StateVector& psi0,
                                     double dt = 0.1);

// Closed-form transfer time without preparation time (N = 1 or 2).
double predict_transfer_time(const LatticeSpec& spec, double control);

// 1 / log10(2J / control)
double localization_length(double control, double hopping = 1.0);

struct OptimizerOptions {
  double t_prep = -1.0;      // negative: model default (30 CL, 15 SSH)
  double box = 0.2;          // free controls searched in [(1-box) c1, (1+box) c1]
  double coarse_step = 0.01;
  double fine_step = 0.001;
  double dt = 0.1;
  double t_max = 0.0;        // 0: derived from the effective chain
};

struct OptimizedPlan {
  ProtocolPlan plan;         // plan.t_tr: first time with fidelity >= f0
  double fidelity = 0.0;     // fidelity at plan.t_tr
  double t_peak = 0.0;       // first fidelity maximum
  double peak_fidelity = 0.0;
  int evaluations = 0;
};

// Mirror-symmetric per-domain controls with c1 on the outer domains that
// reach f0 earliest. Coarse grid on the effective chain, refined on the full lattice.
OptimizedPlan optimize_controls(const LatticeSpec& spec, double c1, double f0 = 0.995,
                                const OptimizerOptions& options = {});

double default_t_prep(const LatticeSpec& spec);

}  // namespace dwall
