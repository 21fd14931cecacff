#include "dwall/effective.hpp"
#include "dwall/protocols.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace dwall {

namespace {

struct Score {
  bool feasible = false;
  double t_first = std::numeric_limits<double>::infinity();
  double t_peak = 0.0;
  double f_peak = 0.0;
  double f_first = 0.0;

  bool better_than(const Score& o) const {
    if (feasible != o.feasible) return feasible;
    if (feasible && t_first != o.t_first) return t_first < o.t_first;
    return f_peak > o.f_peak;
  }
};

// Looks at the first local maximum of the fidelity that exceeds 1/2. Later
// revivals do not count.
Score first_peak(const PlateauScan& scan, double f0, double t_max) {
  Score s;
  double prev_f = -1.0, prev_t = 0.0, crossing = -1.0;
  bool done = false;
  scan.sweep(t_max, [&](double t, Complex amp) {
    const double f = std::norm(amp);
    if (f >= f0 && crossing < 0.0) {
      crossing = t;
      s.f_first = f;
    }
    if (prev_f > 0.5 && f < prev_f) {
      s.t_peak = prev_t;
      s.f_peak = prev_f;
      done = true;
      return false;
    }
    prev_f = f;
    prev_t = t;
    return true;
  });
  if (!done) {
    s.t_peak = prev_t;
    s.f_peak = std::max(prev_f, 0.0);
  }
  if (s.f_peak >= f0 && crossing >= 0.0) {
    s.feasible = true;
    s.t_first = crossing;
  }
  return s;
}

ControlVector controls_from(int domains, double c1, const std::vector<double>& free) {
  std::vector<double> outer{c1};
  outer.insert(outer.end(), free.begin(), free.end());
  return ControlVector::mirrored(domains, outer);
}

}  // namespace

OptimizedPlan optimize_controls(const LatticeSpec& spec, double c1, double f0, const OptimizerOptions& options) {
  spec.validate();
  const int N = spec.domains;
  if (N < 3) throw ValidationError("control optimization needs at least three domains");
  if (!(options.box > 0.0 && options.box < 1.0)) throw ValidationError("search box must lie in (0, 1)");
  const int nfree = (N + 1) / 2 - 1;
  const double tp = options.t_prep >= 0.0 ? options.t_prep : default_t_prep(spec);
  const double lo = (1.0 - options.box) * c1, hi = (1.0 + options.box) * c1;
  int evaluations = 0;

  const StateVector left = compact_state(BoundaryStateId::left(), spec);
  const StateVector right = compact_state(BoundaryStateId::right(), spec);
  auto plan_for = [&](const std::vector<double>& free) {
    ProtocolPlan plan;
    plan.controls = controls_from(N, c1, free);
    plan.t_prep = tp;
    plan.f0 = f0;
    return plan;
  };

  // Stage 1: grid on the effective chain.
  const ControlsToHamiltonian effective = [&spec](const ControlVector& c) {
    return effective_couplings(spec, c).hamiltonian();
  };
  StateVector e_first = StateVector::Zero(N + 1), e_last = StateVector::Zero(N + 1);
  e_first(0) = 1.0;
  e_last(N) = 1.0;
  const double effective_horizon = options.t_max > 0.0 ? options.t_max : 2.0 * tp + 600.0 * N;
  auto effective_score = [&](const std::vector<double>& free) {
    ++evaluations;
    const PlateauScan scan(lr_program(spec, plan_for(free)), effective, e_first, e_last, options.dt);
    return first_peak(scan, f0, effective_horizon);
  };
  const int ticks = static_cast<int>(std::lround((hi - lo) / options.coarse_step));
  auto grid_value = [&](int i) { return lo + i * options.coarse_step; };

  std::vector<double> start(static_cast<std::size_t>(nfree), c1);
  Score start_score = effective_score(start);
  if (std::pow(ticks + 1.0, nfree) <= 5000.0) {
    std::vector<int> idx(static_cast<std::size_t>(nfree), 0);
    for (;;) {
      std::vector<double> x(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) x[i] = grid_value(idx[i]);
      const Score s = effective_score(x);
      if (s.better_than(start_score)) {
        start_score = s;
        start = x;
      }
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] > ticks) idx[i++] = 0;
      if (i == idx.size()) break;
    }
  } else {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < nfree; ++i)
        for (int k = 0; k <= ticks; ++k) {
          std::vector<double> x = start;
          x[static_cast<std::size_t>(i)] = grid_value(k);
          const Score s = effective_score(x);
          if (s.better_than(start_score)) {
            start_score = s;
            start = x;
          }
        }
  }

  // Stage 2: coordinate search on the full lattice, coarse then fine.
  const double horizon = options.t_max > 0.0 ? options.t_max
                         : start_score.t_peak > 0.0 ? 2.0 * start_score.t_peak + 2.0 * tp
                                                    : effective_horizon;
  const ControlsToHamiltonian full = lattice_hamiltonian(spec);
  std::map<std::vector<long>, Score> cache;
  auto key = [&](const std::vector<double>& x) {
    std::vector<long> k;
    for (double v : x) k.push_back(std::lround(v / options.fine_step));
    return k;
  };
  auto full_score = [&](const std::vector<double>& x) {
    const auto k = key(x);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
    ++evaluations;
    const PlateauScan scan(lr_program(spec, plan_for(x)), full, left, right, options.dt);
    const Score s = first_peak(scan, f0, horizon);
    cache.emplace(k, s);
    return s;
  };
  auto snap = [&](double v, double step) { return std::clamp(std::round(v / step) * step, lo, hi); };

  auto descend = [&](std::vector<double> x) {
    for (double& v : x) v = snap(v, options.coarse_step);
    Score best = full_score(x);
    for (double step : {options.coarse_step, options.fine_step}) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (int i = 0; i < nfree; ++i) {
          for (double dir : {-1.0, 1.0}) {
            for (;;) {
              std::vector<double> y = x;
              double& v = y[static_cast<std::size_t>(i)];
              v = snap(v + dir * step, options.fine_step);
              if (v == x[static_cast<std::size_t>(i)]) break;
              const Score s = full_score(y);
              if (!s.better_than(best)) break;
              best = s;
              x = y;
              improved = true;
            }
          }
        }
      }
    }
    return std::pair{x, best};
  };
  auto [x, best] = descend(start);
  if (auto [y, other] = descend(std::vector<double>(static_cast<std::size_t>(nfree), c1)); other.better_than(best)) {
    x = y;
    best = other;
  }
  if (!best.feasible)
    throw OptimizationError("no controls in the search box reach f0 = " + std::to_string(f0) +
                            " (best fidelity " + std::to_string(best.f_peak) + ")");

  OptimizedPlan out;
  out.plan = plan_for(x);
  out.plan.t_tr = best.t_first;
  out.fidelity = best.f_first;
  out.t_peak = best.t_peak;
  out.peak_fidelity = best.f_peak;
  out.evaluations = evaluations;
  return out;
}

}  // namespace dwall
