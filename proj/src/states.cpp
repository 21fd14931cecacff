#include "dwall/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dwall {

std::string to_string(const BoundaryStateId& id) {
  switch (id.kind) {
    case StateKind::Left: return "L";
    case StateKind::Right: return "R";
    case StateKind::S: return "S" + std::to_string(id.k);
    case StateKind::P: return "P" + std::to_string(id.k);
  }
  return "?";
}

int chirality(const BoundaryStateId& id, const LatticeSpec& spec) {
  switch (id.kind) {
    case StateKind::Left: return -1;
    case StateKind::Right: return spec.domains % 2 == 1 ? 1 : -1;
    default: return id.k % 2 == 1 ? 1 : -1;
  }
}

namespace {

void check_wall(const BoundaryStateId& id, const LatticeSpec& spec) {
  if ((id.kind == StateKind::S || id.kind == StateKind::P) && (id.k < 1 || id.k > spec.domains - 1))
    throw IndexError("wall index " + std::to_string(id.k) + " out of range");
  if ((id.extension == Extension::SLeft || id.extension == Extension::SRight) && id.kind != StateKind::S)
    throw ValidationError("left/right extensions exist only for S states");
}

// Adds amp * (|j,A> + chir*i |j,B>) to a ladder state.
void add_rung(StateVector& psi, int j, Complex amp, int chir) {
  psi(flat_index(j, Leg::A)) += amp;
  psi(flat_index(j, Leg::B)) += amp * Complex(0.0, chir);
}

StateVector normalized(StateVector psi) {
  const double n = psi.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("state has zero or non-finite norm");
  return psi / n;
}

double domain_control(const ControlVector& c, int domain) {
  return c.per_domain.at(static_cast<std::size_t>(domain - 1));
}

void check_control(const LatticeSpec& spec, double c) {
  if (spec.kind == ModelKind::SSH) {
    if (c < 0.0 || c >= spec.strong_bond) throw ValidationError("SSH control must satisfy 0 <= v < w");
  } else if (c < 0.0 || c >= 2.0 * spec.hopping) {
    throw ValidationError("Creutz control must satisfy 0 <= c < 2J");
  }
}

// Rung-to-rung amplitude ratio moving away from the localization centre.
Complex decay_ratio(const LatticeSpec& spec, double c, int chir) {
  const double r = c / (2.0 * spec.hopping);
  if (spec.kind == ModelKind::CreutzRunged) return -r;
  return Complex(0.0, -chir * r);
}

StateVector creutz_state(const BoundaryStateId& id, const LatticeSpec& spec, const ControlVector& controls) {
  const int N = spec.domains;
  const int ell = spec.inner;
  const int L = spec.length();
  const int chir = chirality(id, spec);
  StateVector psi = StateVector::Zero(spec.site_count());
  // Amplitude start_amp at distance `first` from centre, times `ratio` per further rung.
  auto profile = [&](int centre, int direction, int first, int last, Complex ratio, Complex start_amp) {
    Complex amp = start_amp;
    for (int n = first; n <= last; ++n) {
      add_rung(psi, centre + direction * n, amp, chir);
      amp *= ratio;
    }
  };
  switch (id.kind) {
    case StateKind::Left: {
      const double c = domain_control(controls, 1);
      check_control(spec, c);
      profile(1, +1, 0, ell, decay_ratio(spec, c, chir), 1.0);
      return normalized(psi);
    }
    case StateKind::Right: {
      const double c = domain_control(controls, N);
      check_control(spec, c);
      profile(L, -1, 0, ell, decay_ratio(spec, c, chir), 1.0);
      return normalized(psi);
    }
    case StateKind::P: {
      const int jk = wall_position(spec, id.k);
      const double cl = domain_control(controls, id.k);
      const double cr = domain_control(controls, id.k + 1);
      check_control(spec, cl);
      check_control(spec, cr);
      const double cmax = std::max(cl, cr);
      if (cmax == 0.0) return compact_state({StateKind::P, id.k, Extension::Compact}, spec);
      const Complex rl = decay_ratio(spec, cl, chir);
      const Complex rr = decay_ratio(spec, cr, chir);
      profile(jk, -1, 1, ell, rl, cl / cmax);
      profile(jk, +1, 1, ell, rr, -cr / cmax);
      return normalized(psi);
    }
    case StateKind::S: {
      const int jk = wall_position(spec, id.k);
      if (id.extension == Extension::SLeft) {
        const double c = domain_control(controls, id.k);
        check_control(spec, c);
        profile(jk, -1, 0, ell, decay_ratio(spec, c, chir), 1.0);
      } else if (id.extension == Extension::SRight) {
        const double c = domain_control(controls, id.k + 1);
        check_control(spec, c);
        profile(jk, +1, 0, ell, decay_ratio(spec, c, chir), 1.0);
      } else {
        add_rung(psi, jk, 1.0, chir);
      }
      return normalized(psi);
    }
  }
  return psi;
}

StateVector ssh_state(const BoundaryStateId& id, const LatticeSpec& spec, const ControlVector& controls) {
  const int N = spec.domains;
  const int half = spec.inner / 2;
  const int L = spec.length();
  const double w = spec.strong_bond;
  StateVector psi = StateVector::Zero(spec.site_count());
  auto profile = [&](int centre, int direction, int first, double v) {
    check_control(spec, v);
    double amp = 1.0;
    for (int n = 0; n < first; ++n) amp *= -v / w;
    for (int n = first; n <= half; ++n) {
      psi(centre + direction * 2 * n - 1) += amp;
      amp *= -v / w;
    }
  };
  switch (id.kind) {
    case StateKind::Left: profile(1, +1, 0, domain_control(controls, 1)); break;
    case StateKind::Right: profile(L, -1, 0, domain_control(controls, N)); break;
    case StateKind::S: {
      if (id.extension == Extension::SLeft || id.extension == Extension::SRight)
        throw CapabilityError("SSH walls have no one-sided S states");
      const int jk = wall_position(spec, id.k);
      psi(jk - 1) = 1.0;
      profile(jk, -1, 1, domain_control(controls, id.k));
      profile(jk, +1, 1, domain_control(controls, id.k + 1));
      break;
    }
    case StateKind::P: throw CapabilityError("SSH chains have no P states");
  }
  return normalized(psi);
}

}  // namespace

StateVector compact_state(const BoundaryStateId& id, const LatticeSpec& spec) {
  spec.validate();
  check_wall(id, spec);
  if (spec.kind == ModelKind::SSH || spec.is_creutz()) {
    if (id.kind == StateKind::P) {
      if (spec.kind == ModelKind::SSH) throw CapabilityError("SSH chains have no P states");
      const int jk = wall_position(spec, id.k);
      const int chir = chirality(id, spec);
      StateVector psi = StateVector::Zero(spec.site_count());
      add_rung(psi, jk - 1, 0.5, chir);
      add_rung(psi, jk + 1, -0.5, chir);
      return psi;
    }
    BoundaryStateId compact = id;
    compact.extension = Extension::Compact;
    return hybridized_state(compact, spec, ControlVector::uniform(spec.domains, 0.0));
  }
  throw CapabilityError("no protected states for model kind " + to_string(spec.kind));
}

StateVector hybridized_state(const BoundaryStateId& id, const LatticeSpec& spec, const ControlVector& controls) {
  spec.validate();
  check_wall(id, spec);
  if (controls.per_domain.size() != static_cast<std::size_t>(spec.domains))
    throw ValidationError("control vector length does not match the domain count");
  if (spec.is_creutz()) return creutz_state(id, spec, controls);
  if (spec.kind == ModelKind::SSH) return ssh_state(id, spec, controls);
  throw CapabilityError("no protected states for model kind " + to_string(spec.kind));
}

StateVector hybridized_state(const BoundaryStateId& id, const LatticeSpec& spec, double control) {
  return hybridized_state(id, spec, ControlVector::uniform(spec.domains, control));
}

NormalizationSet normalization_constants(const LatticeSpec& spec, const ControlVector& controls) {
  NormalizationSet n;
  const int N = spec.domains;
  const double inf = std::numeric_limits<double>::infinity();
  const double J = spec.hopping;
  auto x = [&](double c) { return c == 0.0 ? inf : 4.0 * J * J / (c * c) - 1.0; };
  auto nl = [&](double c) { return c == 0.0 ? inf : std::sqrt(x(c) / 2.0); };
  auto np = [&](double cl, double cr) {
    const double s = (cl == 0.0 ? 0.0 : 1.0 / x(cl)) + (cr == 0.0 ? 0.0 : 1.0 / x(cr));
    return s == 0.0 ? inf : std::sqrt(0.5 / s);
  };
  const double w = spec.strong_bond;
  auto snl = [&](double v) { return v == 0.0 ? inf : std::sqrt(w * w / (v * v) - 1.0); };
  auto sns = [&](double vl, double vr) {
    const double a = vl * vl / (w * w);
    const double b = vr * vr / (w * w);
    return 1.0 / std::sqrt(1.0 + a / (1.0 - a) + b / (1.0 - b));
  };
  const auto& c = controls.per_domain;
  if (c.size() != static_cast<std::size_t>(N)) throw ValidationError("control vector length does not match the domain count");
  if (spec.kind == ModelKind::SSH) {
    n.ssh_left = snl(c.front());
    n.ssh_right = snl(c.back());
    for (int k = 1; k < N; ++k) n.ssh_s.push_back(sns(c[k - 1], c[k]));
  } else {
    n.left = nl(c.front());
    n.right = nl(c.back());
    for (int k = 1; k < N; ++k) n.p.push_back(np(c[k - 1], c[k]));
  }
  return n;
}

std::vector<BoundaryStateId> chain_labels(const LatticeSpec& spec) {
  std::vector<BoundaryStateId> labels{BoundaryStateId::left(Extension::Hybridized)};
  const StateKind wall = spec.kind == ModelKind::SSH ? StateKind::S : StateKind::P;
  for (int k = 1; k < spec.domains; ++k) labels.push_back({wall, k, Extension::Hybridized});
  labels.push_back(BoundaryStateId::right(Extension::Hybridized));
  return labels;
}

std::vector<StateVector> chain_states(const LatticeSpec& spec, const ControlVector& controls) {
  std::vector<StateVector> out;
  for (const auto& id : chain_labels(spec)) out.push_back(hybridized_state(id, spec, controls));
  return out;
}

double state_deviation(const StateVector& analytic, const HamiltonianMatrix& h) {
  const LatticeSpec& spec = h.spec;
  Index protected_count = 0;
  if (spec.is_creutz()) protected_count = 2 * spec.domains;
  else if (spec.kind == ModelKind::SSH) protected_count = spec.domains + 1;
  else throw CapabilityError("no protected subspace for model kind " + to_string(spec.kind));
  if (analytic.size() != h.dim()) throw ValidationError("state dimension mismatch");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.entries);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const RealVector& e = solver.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(e.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(e(a)) < std::abs(e(b)); });

  StateVector projection = StateVector::Zero(analytic.size());
  for (Index i = 0; i < std::min(protected_count, e.size()); ++i) {
    const auto v = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    projection += v * v.dot(analytic);
  }
  const double n = projection.norm();
  if (n < 1e-12) throw NumericalError("analytic state has no weight in the protected subspace");
  projection /= n;
  const Complex overlap = projection.dot(analytic);
  if (std::abs(overlap) > 0.0) projection *= overlap / std::abs(overlap);
  return (analytic - projection).norm();
}

}  // namespace dwall
