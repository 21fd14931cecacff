#include "dwall/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <mutex>
#include <thread>

namespace dwall {

double fidelity(const StateVector& psi, const StateVector& target) {
  if (psi.size() != target.size()) throw ValidationError("state dimensions differ");
  return std::norm(target.dot(psi));
}

RealVector rung_occupation(const StateVector& psi, const LatticeSpec& spec) {
  if (psi.size() != spec.site_count()) throw ValidationError("state dimension does not match the lattice");
  if (!spec.is_ladder()) return psi.cwiseAbs2();
  const Index L = spec.length();
  RealVector n(L);
  for (Index j = 0; j < L; ++j) n(j) = std::norm(psi(2 * j)) + std::norm(psi(2 * j + 1));
  return n;
}

RealVector topological_occupation(const StateVector& psi, const std::vector<StateVector>& states) {
  RealVector n(static_cast<Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) n(static_cast<Index>(k)) = fidelity(psi, states[k]);
  return n;
}

namespace {
Complex ipow(Complex base, int n) {
  Complex r = 1.0;
  for (int i = 0; i < std::abs(n); ++i) r *= base;
  return n < 0 ? 1.0 / r : r;
}
double sign_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }
}  // namespace

Complex zeta_formula(const PhaseQuery& q) {
  if (q.walls < 0 || q.ell < 1) throw ValidationError("invalid phase query");
  const bool even = q.walls % 2 == 0;
  switch (q.model) {
    case PhaseModel::CLImbalanced: {
      if (!even) return sign_pow((q.walls - 1) / 2);
      const int delta = q.chirality == q.direction ? 1 : 0;
      return sign_pow(q.walls / 2 + delta) * ipow(sign_pow(delta) * kI, q.ell);
    }
    case PhaseModel::CLRunged: {
      if (!even) return sign_pow((q.walls - 1) / 2);
      const int delta = -q.chirality == q.direction ? 1 : 0;
      return sign_pow(q.ell + q.walls / 2 + delta);
    }
    case PhaseModel::SSH:
      if (even) {
        if ((q.walls + q.ell) % 2 != 0) throw ValidationError("SSH phases need even l");
        return sign_pow((q.walls + q.ell) / 2);
      }
      return sign_pow((q.walls + 1) / 2) * kI;
  }
  return 1.0;
}

double acquired_phase(const ProtocolResult& result, const StateVector& target) {
  const Complex amp = target.dot(result.final_state);
  if (std::norm(amp) <= 0.5) throw UnreliablePhaseError("fidelity too low for a meaningful phase");
  return std::arg(amp);
}

double phase_distance(double a, double b) {
  const double d = std::abs(std::remainder(a - b, 2.0 * kPi));
  return std::min(d, 2.0 * kPi - d);
}

double circular_std(const std::vector<double>& phases) {
  if (phases.empty()) throw ValidationError("no phases");
  Complex sum = 0.0;
  for (double p : phases) sum += std::polar(1.0, p);
  const double r = std::min(1.0, std::abs(sum) / static_cast<double>(phases.size()));
  return std::sqrt(2.0 * (1.0 - r));
}

SweepReport disorder_sweep(const LatticeSpec& spec, const RealizationRunner& run, DisorderKind kind,
                           const std::vector<double>& levels, int realizations, std::uint64_t master_seed,
                           int jobs) {
  if (realizations < 1) throw ValidationError("need at least one realization");
  const std::size_t M = static_cast<std::size_t>(realizations);
  const std::size_t total = levels.size() * M;
  std::vector<double> fid(total), phase(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const double level = levels[task / M];
      const std::size_t m = task % M;
      try {
        const std::uint64_t seed = RandomStream::derive(master_seed, m);
        const bool clean = level == 0.0 || kind == DisorderKind::None;
        const DisorderRealization d =
            clean ? DisorderRealization{}
                  : sample_disorder(spec, kind, level, kind == DisorderKind::General ? level : 0.0, seed);
        const ProtocolResult r = run(d);
        fid[task] = r.fidelity;
        phase[task] = std::arg(r.target.dot(r.final_state));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepReport rep;
  rep.levels = levels;
  rep.realizations = realizations;
  rep.master_seed = master_seed;
  rep.kind = kind;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto f0 = fid.begin() + static_cast<std::ptrdiff_t>(l * M);
    const double mean = std::accumulate(f0, f0 + static_cast<std::ptrdiff_t>(M), 0.0) / static_cast<double>(M);
    double var = 0.0;
    for (auto it = f0; it != f0 + static_cast<std::ptrdiff_t>(M); ++it) var += (*it - mean) * (*it - mean);
    var = M > 1 ? var / static_cast<double>(M - 1) : 0.0;
    rep.mean_fidelity.push_back(std::clamp(mean, 0.0, 1.0));
    rep.std_fidelity.push_back(std::sqrt(var));
    rep.phase_circ_std.push_back(circular_std(
        std::vector<double>(phase.begin() + static_cast<std::ptrdiff_t>(l * M),
                            phase.begin() + static_cast<std::ptrdiff_t>((l + 1) * M))));
  }
  return rep;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("line fit needs at least two points");
  Eigen::MatrixXd a(static_cast<Index>(x.size()), 2);
  Eigen::VectorXd b(static_cast<Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    a(static_cast<Index>(i), 0) = 1.0;
    a(static_cast<Index>(i), 1) = x[i];
    b(static_cast<Index>(i)) = y[i];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  return {c(0), c(1)};
}

LengthSeries length_series_from_string(const std::string& name) {
  if (name == "single-domain" || name == "single") return LengthSeries::SingleDomain;
  if (name == "two-domain" || name == "two") return LengthSeries::TwoDomain;
  if (name == "fixed-ell" || name == "fixed") return LengthSeries::FixedEll;
  throw ValidationError("unknown length series '" + name + "'");
}

std::string to_string(LengthSeries series) {
  switch (series) {
    case LengthSeries::SingleDomain: return "single-domain";
    case LengthSeries::TwoDomain: return "two-domain";
    case LengthSeries::FixedEll: return "fixed-ell";
  }
  return "?";
}

namespace {

LatticeSpec make_spec(ModelKind kind, int domains, int inner) {
  switch (kind) {
    case ModelKind::CreutzImbalanced: return LatticeSpec::creutz(domains, inner);
    case ModelKind::CreutzRunged: return LatticeSpec::runged(domains, inner);
    case ModelKind::SSH: return LatticeSpec::ssh(domains, inner);
    default: throw CapabilityError("length scans need a multidomain kind");
  }
}

LengthPoint scan_point(const LatticeSpec& spec, const LengthScanOptions& o) {
  const double tp = o.t_prep >= 0.0 ? o.t_prep : default_t_prep(spec);
  LengthPoint p;
  p.length = spec.length();
  p.domains = spec.domains;
  p.inner = spec.inner;
  ProtocolPlan plan;
  plan.t_prep = tp;
  plan.f0 = o.f0;
  if (spec.domains >= 3 && !o.controls_for) {
    OptimizerOptions opt;
    opt.t_prep = tp;
    opt.dt = o.dt;
    const OptimizedPlan best = optimize_controls(spec, o.control, o.f0, opt);
    p.t_tr = best.plan.t_tr;
    p.fidelity = best.fidelity;
    p.controls = best.plan.controls.per_domain;
    return p;
  }
  plan.controls = spec.domains >= 3 ? ControlVector{o.controls_for(spec.domains), {}, {}, {}}
                                    : ControlVector::uniform(spec.domains, o.control);
  if (plan.controls.per_domain.size() != static_cast<std::size_t>(spec.domains))
    throw ValidationError("controls_for returned the wrong number of controls");
  double horizon = 400.0 * spec.domains;
  if (spec.domains <= 2) horizon = 3.0 * predict_transfer_time(spec, o.control) + 200.0;
  const PlateauScan scan(lr_program(spec, plan), lattice_hamiltonian(spec),
                         compact_state(BoundaryStateId::left(), spec), compact_state(BoundaryStateId::right(), spec),
                         o.dt);
  const OptimalTime t = find_optimal_time(scan, {o.f0, 0.0, horizon + 2.0 * tp, o.dt});
  p.t_tr = t.t_tr;
  p.fidelity = t.fidelity;
  p.controls = plan.controls.per_domain;
  return p;
}

}  // namespace

LengthScan length_scan(LengthSeries series, int from, int to, const LengthScanOptions& options) {
  if (from > to) throw ValidationError("empty length range");
  LengthScan out;
  out.series = series;
  for (int v = from; v <= to; ++v) {
    LatticeSpec spec;
    switch (series) {
      case LengthSeries::SingleDomain: spec = make_spec(options.kind, 1, v); break;
      case LengthSeries::TwoDomain: spec = make_spec(options.kind, 2, v); break;
      case LengthSeries::FixedEll: spec = make_spec(options.kind, v, options.fixed_inner); break;
    }
    spec.validate();
    out.points.push_back(scan_point(spec, options));
  }
  std::vector<double> x, y, ly;
  for (const auto& p : out.points) {
    x.push_back(p.length);
    y.push_back(p.t_tr);
    ly.push_back(std::log(p.t_tr));
  }
  if (x.size() >= 2) out.log_fit = fit_line(x, ly);
  if (series == LengthSeries::FixedEll && x.size() >= 3)
    out.fit = fit_line({x.begin() + 1, x.end()}, {y.begin() + 1, y.end()});
  else if (x.size() >= 2)
    out.fit = fit_line(x, y);
  return out;
}

}  // namespace dwall
