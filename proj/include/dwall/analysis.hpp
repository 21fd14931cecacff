#pragma once

#include "dwall/protocols.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace dwall {

double fidelity(const StateVector& psi, const StateVector& target);

// Per-rung occupation for ladders; per-site occupation for chains.
RealVector rung_occupation(const StateVector& psi, const LatticeSpec& spec);
RealVector topological_occupation(const StateVector& psi, const std::vector<StateVector>& states);

enum class PhaseModel { CLImbalanced, CLRunged, SSH };

struct PhaseQuery {
  PhaseModel model = PhaseModel::CLImbalanced;
  int ell = 4;
  int walls = 0;      // n_w
  int chirality = -1; // x, CL only
  int direction = 1;  // +1 left to right, -1 right to left; CL only
};

Complex zeta_formula(const PhaseQuery& query);
double acquired_phase(const ProtocolResult& result, const StateVector& target);
// Distance on the circle, in [0, pi].
double phase_distance(double a, double b);
double circular_std(const std::vector<double>& phases);

struct SweepReport {
  std::vector<double> levels;
  std::vector<double> mean_fidelity;
  std::vector<double> std_fidelity;
  std::vector<double> phase_circ_std;
  int realizations = 0;
  std::uint64_t master_seed = 0;
  DisorderKind kind = DisorderKind::None;
};

using RealizationRunner = std::function<ProtocolResult(const DisorderRealization&)>;

// Realization m of every level uses the stream derived from (master_seed, m).
SweepReport disorder_sweep(const LatticeSpec& spec, const RealizationRunner& run, DisorderKind kind,
                           const std::vector<double>& levels, int realizations, std::uint64_t master_seed,
                           int jobs = 1);

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

enum class LengthSeries { SingleDomain, TwoDomain, FixedEll };
LengthSeries length_series_from_string(const std::string& name);
std::string to_string(LengthSeries series);

struct LengthPoint {
  int length = 0;
  int domains = 0;
  int inner = 0;
  double t_tr = 0.0;
  double fidelity = 0.0;
  std::vector<double> controls;
};

struct LengthScanOptions {
  ModelKind kind = ModelKind::CreutzImbalanced;
  double control = 1.0;
  double t_prep = -1.0;  // negative: model default
  double f0 = 0.995;
  double dt = 0.1;
  int fixed_inner = 4;
  // Optional per-domain controls for N >= 3 (FixedEll); the optimizer is used otherwise.
  std::function<std::vector<double>(int domains)> controls_for;
};

struct LengthScan {
  LengthSeries series = LengthSeries::FixedEll;
  std::vector<LengthPoint> points;
  LineFit fit;       // t = t0 + A0 L (FixedEll, first point excluded)
  LineFit log_fit;   // ln t = a + b L (all points)
};

// from/to are inner lengths l (SingleDomain, TwoDomain) or domain counts N (FixedEll).
LengthScan length_scan(LengthSeries series, int from, int to, const LengthScanOptions& options);

}  // namespace dwall
