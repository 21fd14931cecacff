#include "dwall/protocols.hpp"

#include "dwall/analysis.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>

namespace dwall {

double Program::duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

ControlVector Program::controls_at(double t) const {
  if (segments.empty()) throw ValidationError("empty program");
  double start = 0.0;
  for (const auto& s : segments) {
    if (t <= start + s.duration) return s.controls(std::max(0.0, t - start));
    start += s.duration;
  }
  return segments.back().controls(segments.back().duration);
}

double PlateauProgram::fixed_duration() const {
  double t = 0.0;
  for (const auto& s : prefix) t += s.duration;
  for (const auto& s : suffix) t += s.duration;
  return t;
}

Program PlateauProgram::with_total(double total) const {
  const double plateau_time = total - fixed_duration();
  if (plateau_time < -1e-9) throw ValidationError("total time shorter than the ramps");
  Program p;
  p.segments = prefix;
  ControlVector c = plateau;
  p.segments.push_back({std::max(0.0, plateau_time), [c](double) { return c; }, true});
  p.segments.insert(p.segments.end(), suffix.begin(), suffix.end());
  return p;
}

ControlsToHamiltonian lattice_hamiltonian(const LatticeSpec& spec, const DisorderRealization& disorder) {
  return [spec, disorder](const ControlVector& c) { return assemble_hamiltonian(spec, c, disorder).entries; };
}

namespace {

// Applies the steps of one segment to psi; adjoint runs them backwards with -dt.
StateVector run_segment(const Segment& seg, const ControlsToHamiltonian& hamiltonian, StateVector psi, double dt,
                        bool adjoint, double t_offset, const ProgramObserver& observer) {
  const int steps = step_count(seg.duration, dt);
  if (steps == 0) return psi;
  const double h = seg.duration / steps;
  if (seg.constant) {
    Propagator p(hamiltonian(seg.controls(0.0)));
    if (!observer) return p.apply(psi, adjoint ? -seg.duration : seg.duration);
    const ControlVector c = seg.controls(0.0);
    for (int s = 0; s < steps; ++s) {
      psi = p.apply(psi, h);
      observer(t_offset + (s + 1) * h, psi, c);
    }
    return psi;
  }
  Propagator p;
  ComplexMatrix previous;
  for (int i = 0; i < steps; ++i) {
    const int s = adjoint ? steps - 1 - i : i;
    ComplexMatrix current = hamiltonian(seg.controls((s + 0.5) * h));
    if (previous.size() == 0 || current != previous) {
      p.compute(current);
      previous = std::move(current);
    }
    psi = p.apply(psi, adjoint ? -h : h);
    if (!psi.allFinite()) throw NumericalError("non-finite amplitudes during evolution");
    if (observer) observer(t_offset + (s + 1) * h, psi, seg.controls((s + 1) * h));
  }
  return psi;
}

}  // namespace

StateVector run_program(const Program& program, const ControlsToHamiltonian& hamiltonian, StateVector psi,
                        double dt, const ProgramObserver& observer) {
  double t = 0.0;
  for (const auto& seg : program.segments) {
    psi = run_segment(seg, hamiltonian, std::move(psi), dt, false, t, observer);
    t += seg.duration;
  }
  return psi;
}

PlateauScan::PlateauScan(const PlateauProgram& program, const ControlsToHamiltonian& hamiltonian,
                         const StateVector& psi0, const StateVector& target, double dt)
    : start_(program.fixed_duration()), dt_(dt) {
  StateVector a = psi0;
  for (const auto& seg : program.prefix) a = run_segment(seg, hamiltonian, std::move(a), dt, false, 0.0, {});
  StateVector b = target;
  for (auto it = program.suffix.rbegin(); it != program.suffix.rend(); ++it)
    b = run_segment(*it, hamiltonian, std::move(b), dt, true, 0.0, {});
  Propagator plateau(hamiltonian(program.plateau));
  const StateVector ca = plateau.to_eigenbasis(a);
  const StateVector cb = plateau.to_eigenbasis(b);
  energies_ = plateau.energies();
  weights_ = cb.conjugate().cwiseProduct(ca);
}

Complex PlateauScan::amplitude(double total) const {
  const double tau = total - start_;
  if (tau < -1e-9) throw ValidationError("total time shorter than the ramps");
  Complex sum = 0.0;
  for (Index n = 0; n < weights_.size(); ++n) sum += weights_(n) * std::polar(1.0, -energies_(n) * tau);
  return sum;
}

void PlateauScan::sweep(double t_end, const std::function<bool(double, Complex)>& visit) const {
  const Index n = weights_.size();
  StateVector step(n), z(n);
  for (Index i = 0; i < n; ++i) step(i) = std::polar(1.0, -energies_(i) * dt_);
  constexpr long kResync = 2048;
  for (long m = 0;; ++m) {
    const double t = start_ + m * dt_;
    if (t > t_end + 1e-9) return;
    if (m % kResync == 0) {
      for (Index i = 0; i < n; ++i) z(i) = weights_(i) * std::polar(1.0, -energies_(i) * (m * dt_));
    } else {
      z = z.cwiseProduct(step);
    }
    if (!visit(t, z.sum())) return;
  }
}

OptimalTime find_optimal_time(const PlateauScan& scan, const TimeSearch& search) {
  OptimalTime out;
  bool crossed = false;
  double best_f = -1.0, best_t = 0.0, prev_f = -1.0, prev_t = 0.0;
  scan.sweep(search.t_max, [&](double t, Complex amp) {
    if (t < search.t_min - 1e-9) return true;
    const double f = std::norm(amp);
    if (f > best_f) {
      best_f = f;
      best_t = t;
    }
    if (!crossed) {
      if (f >= search.f0) {
        crossed = true;
        out.t_tr = t;
        out.fidelity = f;
      }
    } else if (f < prev_f) {
      out.t_peak = prev_t;
      out.peak_fidelity = prev_f;
      return false;
    }
    prev_f = f;
    prev_t = t;
    return true;
  });
  if (!crossed) throw NotFoundError("fidelity threshold not reached before t_max", best_f, best_t);
  if (out.peak_fidelity == 0.0) {
    out.t_peak = prev_t;
    out.peak_fidelity = prev_f;
  }
  return out;
}

OptimalTime find_optimal_time(const std::function<double(double)>& fidelity_at, const TimeSearch& search) {
  const double dt = search.dt;
  const long last = static_cast<long>(std::floor((search.t_max - search.t_min) / dt + 1e-9));
  std::map<long, double> cache;
  double best_f = -1.0, best_t = 0.0;
  auto F = [&](long k) {
    if (auto it = cache.find(k); it != cache.end()) return it->second;
    const double t = search.t_min + k * dt;
    const double f = fidelity_at(t);
    cache.emplace(k, f);
    if (f > best_f) {
      best_f = f;
      best_t = t;
    }
    return f;
  };
  auto first_at_or_above = [&](long lo, long hi, long stride) -> std::optional<long> {
    for (long k = std::max(0L, lo); k <= std::min(hi, last); k += stride)
      if (F(k) >= search.f0) return k;
    return std::nullopt;
  };
  auto finish = [&](long k_coarse) {
    // k_coarse is the first stride-10 hit; narrow it down to the 0.1 grid.
    long k = k_coarse;
    if (auto r = first_at_or_above(k_coarse - 9, k_coarse, 1)) k = *r;
    OptimalTime out;
    out.t_tr = search.t_min + k * dt;
    out.fidelity = F(k);
    while (k + 1 <= last && F(k + 1) >= F(k)) ++k;
    out.t_peak = search.t_min + k * dt;
    out.peak_fidelity = F(k);
    return out;
  };
  auto crossing = [&](long lo, long hi) {
    auto r = first_at_or_above(lo + 10, hi, 10);
    return finish(r ? *r : hi);
  };
  auto probe = [&](long lo, long hi) -> std::optional<OptimalTime> {
    long best_k = lo;
    for (long k = lo + 10; k < hi; k += 10) {
      if (F(k) >= search.f0) return finish(k);
      if (F(k) > F(best_k)) best_k = k;
    }
    if (auto r = first_at_or_above(best_k - 9, best_k + 9, 1)) return finish(*r);
    return std::nullopt;
  };
  for (long k = 0; k <= last; k += 100) {
    const double f = F(k);
    if (f >= search.f0) {
      if (k == 0) return finish(0);
      return crossing(k - 100, k);
    }
    if (k >= 200 && F(k - 100) >= F(k - 200) && F(k - 100) >= f) {
      if (auto r = probe(k - 200, k)) return *r;
    }
  }
  throw NotFoundError("fidelity threshold not reached before t_max", best_f, best_t);
}

namespace {

ControlVector scaled(const ControlVector& c, double s) {
  ControlVector out = c;
  for (double& x : out.per_domain) x *= s;
  for (auto& [k, x] : out.wall_overrides) x *= s;
  return out;
}

double ramp_up(double tau, double t_prep) {
  if (t_prep <= 0.0) return 1.0;
  const double s = std::sin(kPi / (2.0 * t_prep) * tau);
  return s * s;
}

double ramp_down(double tau, double t_prep) {
  if (t_prep <= 0.0) return 0.0;
  const double s = std::sin(kPi / (2.0 * t_prep) * (tau - t_prep));
  return s * s;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Recorder {
  const LatticeSpec& spec;
  const RunOptions& options;
  std::vector<OccupationSample>& samples;

  void operator()(double t, const StateVector& psi, const ControlVector& controls) const {
    OccupationSample s;
    s.t = t;
    s.rungs = rung_occupation(psi, spec);
    std::vector<StateVector> states = options.watch;
    if (options.watch_chain) {
      const auto chain = chain_states(spec, controls);
      states.insert(states.end(), chain.begin(), chain.end());
    }
    if (!states.empty()) s.topological = topological_occupation(psi, states);
    samples.push_back(std::move(s));
  }
};

ProtocolResult execute(const LatticeSpec& spec, const Program& program, const ControlsToHamiltonian& hamiltonian,
                       const StateVector& source, const StateVector& target, double t_tr, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ProtocolResult r;
  const StateVector psi0 = options.initial.value_or(source);
  r.target = options.target.value_or(target);
  if (psi0.size() != spec.site_count() || r.target.size() != spec.site_count())
    throw ValidationError("state dimension does not match the lattice");
  ProgramObserver observer;
  if (options.record || !options.watch.empty() || options.watch_chain) {
    Recorder rec{spec, options, r.occupations};
    rec(0.0, psi0, program.controls_at(0.0));
    observer = rec;
  }
  r.final_state = run_program(program, hamiltonian, psi0, options.dt, observer);
  r.amplitude = r.target.dot(r.final_state);
  r.fidelity = std::min(1.0, std::norm(r.amplitude));
  r.acquired_phase = std::arg(r.amplitude);
  r.timing = {t_tr, options.dt, elapsed_since(start)};
  return r;
}

}  // namespace

PlateauProgram lr_program(const LatticeSpec& spec, const ProtocolPlan& plan) {
  if (plan.controls.per_domain.size() != static_cast<std::size_t>(spec.domains))
    throw ValidationError("plan controls do not match the domain count");
  const ControlVector c = plan.controls;
  const double tp = plan.t_prep;
  PlateauProgram p;
  p.plateau = c;
  if (tp > 0.0) {
    p.prefix.push_back({tp, [c, tp](double tau) { return scaled(c, ramp_up(tau, tp)); }, false});
    p.suffix.push_back({tp, [c, tp](double tau) { return scaled(c, ramp_down(tau, tp)); }, false});
  }
  return p;
}

ProtocolResult run_lr_transfer(const LatticeSpec& spec, const ProtocolPlan& plan, const DisorderRealization& disorder,
                               const RunOptions& options) {
  plan.validate();
  const Program program = lr_program(spec, plan).with_total(plan.t_tr);
  return execute(spec, program, lattice_hamiltonian(spec, disorder), compact_state(BoundaryStateId::left(), spec),
                 compact_state(BoundaryStateId::right(), spec), plan.t_tr, options);
}

PlateauProgram ls_program(const LatticeSpec& spec, int k, const ProtocolPlan& plan, const BarrierPlan& barrier) {
  const int N = spec.domains;
  if (!spec.is_creutz()) throw CapabilityError("L-to-S transfers need a Creutz ladder");
  if (k < 1 || k > N - 1) throw IndexError("wall index out of range");
  if (barrier.domain != k && barrier.domain != k + 1)
    throw ValidationError("barrier must sit in a domain adjacent to the target wall");
  if (!(barrier.height > 2.0 * spec.hopping)) throw ValidationError("barrier height must exceed 2J");
  if (plan.controls.per_domain.size() != static_cast<std::size_t>(N))
    throw ValidationError("plan controls do not match the domain count");
  const bool from_left = barrier.domain == k + 1;
  const int neighbour = from_left ? k : k + 1;
  const ControlVector plan_c = plan.controls;
  const int bd = barrier.domain;
  auto controls = [=](double beta, double s) {
    ControlVector c = ControlVector::uniform(N, 0.0);
    for (int d = 1; d <= N; ++d) {
      const bool active = from_left ? d <= k : d > k;
      if (active) c.per_domain[static_cast<std::size_t>(d - 1)] = s * plan_c.per_domain[static_cast<std::size_t>(d - 1)];
    }
    c.per_domain[static_cast<std::size_t>(bd - 1)] = beta;
    c.wall_overrides[k] = s * plan_c.per_domain[static_cast<std::size_t>(neighbour - 1)];
    if (bd == 1) c.wall_overrides[0] = 0.0;
    if (bd == N) c.wall_overrides[N] = 0.0;
    return c;
  };
  const double h = barrier.height;
  const double tb = barrier.t_prep;
  const double tp = plan.t_prep;
  PlateauProgram p;
  p.plateau = controls(h, 1.0);
  if (tb > 0.0) p.prefix.push_back({tb, [=](double tau) { return controls(h * ramp_up(tau, tb), 0.0); }, false});
  if (tp > 0.0) {
    p.prefix.push_back({tp, [=](double tau) { return controls(h, ramp_up(tau, tp)); }, false});
    p.suffix.push_back({tp, [=](double tau) { return controls(h, ramp_down(tau, tp)); }, false});
  }
  if (tb > 0.0) p.suffix.push_back({tb, [=](double tau) { return controls(h * ramp_down(tau, tb), 0.0); }, false});
  return p;
}

ProtocolResult run_ls_transfer(const LatticeSpec& spec, int k, const ProtocolPlan& plan, const BarrierPlan& barrier,
                               const DisorderRealization& disorder, const RunOptions& options) {
  plan.validate();
  const PlateauProgram pp = ls_program(spec, k, plan, barrier);
  const Program program = pp.with_total(plan.t_tr + 2.0 * barrier.t_prep);
  const bool from_left = barrier.domain == k + 1;
  const StateVector source = compact_state(from_left ? BoundaryStateId::left() : BoundaryStateId::right(), spec);
  return execute(spec, program, lattice_hamiltonian(spec, disorder), source,
                 compact_state(BoundaryStateId::s(k), spec), plan.t_tr, options);
}

namespace {

std::vector<Index> end_sites(const LatticeSpec& spec, bool left) {
  const int j = left ? 1 : spec.length();
  if (spec.kind == ModelKind::TrivialLadder) return {flat_index(j, Leg::A), flat_index(j, Leg::B)};
  return {chain_site(spec, j)};
}

StateVector end_state(const LatticeSpec& spec, bool left) {
  StateVector psi = StateVector::Zero(spec.site_count());
  const auto sites = end_sites(spec, left);
  for (Index s : sites) psi(s) = 1.0 / std::sqrt(static_cast<double>(sites.size()));
  return psi;
}

}  // namespace

Program trivial_program(const LatticeSpec& spec, double mu0, double t_tr) {
  if (!spec.is_trivial()) throw CapabilityError("well-based transfers need a trivial lattice");
  if (!(mu0 > 0.0)) throw ValidationError("well depth must be positive");
  if (t_tr < 0.0) throw ValidationError("transfer time must be non-negative");
  std::vector<Index> sites = end_sites(spec, true);
  const auto right = end_sites(spec, false);
  sites.insert(sites.end(), right.begin(), right.end());
  const int N = spec.domains;
  Program p;
  p.segments.push_back({t_tr, [=](double tau) {
                          ControlVector c = ControlVector::uniform(N, 0.0);
                          const double s = std::cos(kPi * tau / t_tr);
                          for (Index site : sites) c.onsite[site] = -mu0 * s * s;
                          return c;
                        },
                        false});
  return p;
}

ProtocolResult run_trivial_transfer(const LatticeSpec& spec, double mu0, double t_tr,
                                    const DisorderRealization& disorder, const RunOptions& options) {
  const Program program = trivial_program(spec, mu0, t_tr);
  return execute(spec, program, lattice_hamiltonian(spec, disorder), end_state(spec, true), end_state(spec, false),
                 t_tr, options);
}

Program superposition_program(const LatticeSpec& spec, const SuperpositionPlan& plan) {
  const int N = spec.domains;
  if (spec.kind != ModelKind::CreutzImbalanced) throw CapabilityError("superposition transfer needs an imbalanced ladder");
  if (N < 3) throw ValidationError("superposition transfer needs at least three domains");
  if (plan.stage_controls.size() != static_cast<std::size_t>(N - 1))
    throw ValidationError("stage controls must cover N-1 domains");
  if (!(plan.barrier_height > 2.0 * spec.hopping)) throw ValidationError("barrier height must exceed 2J");
  const double tb = plan.barrier_t_prep;
  const double tp = plan.t_prep;
  const double stage = (plan.total_time - 3.0 * tb) / 2.0;
  if (stage < 2.0 * tp) throw ValidationError("total time too short for the two stages");
  const double h = plan.barrier_height;
  const std::vector<double> sc = plan.stage_controls;

  // first_stage: S_1 -> R over domains 2..N with the barrier in domain 1;
  // second stage: L -> S_{N-1} over domains 1..N-1 with the barrier in domain N.
  auto controls = [=](double left_barrier, double right_barrier, int stage_index, double s) {
    ControlVector c = ControlVector::uniform(N, 0.0);
    c.wall_overrides[0] = 0.0;
    c.wall_overrides[N] = 0.0;
    if (stage_index == 1) {
      for (int d = 2; d <= N; ++d) c.per_domain[static_cast<std::size_t>(d - 1)] = s * sc[static_cast<std::size_t>(d - 2)];
      c.wall_overrides[1] = s * sc.front();
      c.wall_overrides.erase(N);
    } else if (stage_index == 2) {
      for (int d = 1; d <= N - 1; ++d) c.per_domain[static_cast<std::size_t>(d - 1)] = s * sc[static_cast<std::size_t>(d - 1)];
      c.wall_overrides[N - 1] = s * sc.back();
      c.wall_overrides.erase(0);
    }
    c.per_domain.front() += left_barrier;
    c.per_domain.back() += right_barrier;
    return c;
  };
  Program p;
  auto add = [&](double duration, std::function<ControlVector(double)> f, bool constant = false) {
    p.segments.push_back({duration, std::move(f), constant});
  };
  add(tb, [=](double tau) { return controls(h * ramp_up(tau, tb), 0.0, 0, 0.0); });
  add(tp, [=](double tau) { return controls(h, 0.0, 1, ramp_up(tau, tp)); });
  add(stage - 2.0 * tp, [=](double) { return controls(h, 0.0, 1, 1.0); }, true);
  add(tp, [=](double tau) { return controls(h, 0.0, 1, ramp_down(tau, tp)); });
  add(tb, [=](double tau) { return controls(h * ramp_down(tau, tb), h * ramp_up(tau, tb), 0, 0.0); });
  add(tp, [=](double tau) { return controls(0.0, h, 2, ramp_up(tau, tp)); });
  add(stage - 2.0 * tp, [=](double) { return controls(0.0, h, 2, 1.0); }, true);
  add(tp, [=](double tau) { return controls(0.0, h, 2, ramp_down(tau, tp)); });
  add(tb, [=](double tau) { return controls(0.0, h * ramp_down(tau, tb), 0, 0.0); });
  return p;
}

ProtocolResult run_superposition_transfer(const LatticeSpec& spec, const SuperpositionPlan& plan,
                                          const DisorderRealization& disorder, const RunOptions& options) {
  const Program program = superposition_program(spec, plan);
  const int N = spec.domains;
  const StateVector source =
      (compact_state(BoundaryStateId::left(), spec) + compact_state(BoundaryStateId::s(1), spec)) / std::sqrt(2.0);
  const StateVector target =
      (-compact_state(BoundaryStateId::s(N - 1), spec) + compact_state(BoundaryStateId::right(), spec)) / std::sqrt(2.0);
  return execute(spec, program, lattice_hamiltonian(spec, disorder), source, target, plan.total_time, options);
}

Program superposition_line_program(const LatticeSpec& spec, double mu0, double total_time) {
  if (spec.kind != ModelKind::TrivialChain || !spec.split_ends)
    throw CapabilityError("the two-stage line needs a split-end trivial chain");
  if (!(mu0 > 0.0)) throw ValidationError("well depth must be positive");
  const int N = spec.domains;
  const int L = spec.length();
  const double stage = total_time / 2.0;
  const Index la = chain_site(spec, 1, Leg::A), lb = chain_site(spec, 1, Leg::B);
  const Index ra = chain_site(spec, L, Leg::A), rb = chain_site(spec, L, Leg::B);
  auto controls = [=](Index moving_l, Index moving_r, Index idle_l, Index idle_r, double tau) {
    ControlVector c = ControlVector::uniform(N, 0.0);
    const double s = std::cos(kPi * tau / stage);
    c.onsite[moving_l] = c.onsite[moving_r] = -mu0 * s * s;
    // the idle pair waits in its wells, detached from the line
    c.onsite[idle_l] = c.onsite[idle_r] = -mu0;
    c.bond_scale[idle_l] = c.bond_scale[idle_r] = 0.0;
    return c;
  };
  Program p;
  p.segments.push_back({stage, [=](double tau) { return controls(la, ra, lb, rb, tau); }, false});
  p.segments.push_back({stage, [=](double tau) { return controls(lb, rb, la, ra, tau); }, false});
  return p;
}

ProtocolResult run_superposition_line(const LatticeSpec& spec, double mu0, double total_time,
                                      const DisorderRealization& disorder, const RunOptions& options) {
  const Program program = superposition_line_program(spec, mu0, total_time);
  const int L = spec.length();
  StateVector source = StateVector::Zero(spec.site_count());
  StateVector target = StateVector::Zero(spec.site_count());
  source(chain_site(spec, 1, Leg::A)) = source(chain_site(spec, 1, Leg::B)) = 1.0 / std::sqrt(2.0);
  target(chain_site(spec, L, Leg::A)) = target(chain_site(spec, L, Leg::B)) = 1.0 / std::sqrt(2.0);
  return execute(spec, program, lattice_hamiltonian(spec, disorder), source, target, total_time, options);
}

ProtocolResult run_state_preparation(const LatticeSpec& spec, SiteIndex start, double ramp_time,
                                     const RunOptions& options) {
  if (!spec.is_creutz()) throw CapabilityError("state preparation is defined on Creutz ladders");
  if (ramp_time < 0.0) throw ValidationError("ramp time must be non-negative");
  const DomainInfo info = domain_scheme(spec, start.j);
  if (!info.is_wall) throw ValidationError("preparation starts on an end or wall rung");
  BoundaryStateId target_id = BoundaryStateId::s(info.domain);
  if (start.j == 1) target_id = BoundaryStateId::left();
  else if (start.j == spec.length()) target_id = BoundaryStateId::right();
  const Index site = start.flat();
  const int N = spec.domains;
  Program p;
  p.segments.push_back({ramp_time, [=](double tau) {
                          ControlVector c = ControlVector::uniform(N, 0.0);
                          const double s = std::sin(kPi * tau / (2.0 * ramp_time));
                          c.bond_scale[site] = s * s;
                          return c;
                        },
                        false});
  StateVector psi0 = StateVector::Zero(spec.site_count());
  psi0(site) = 1.0;
  return execute(spec, p, lattice_hamiltonian(spec), psi0, compact_state(target_id, spec), ramp_time, options);
}

}  // namespace dwall
