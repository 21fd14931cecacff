#include "cli_support.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <thread>

using namespace dwall;
using dwall::cli::Config;
using dwall::cli::KeySpec;
using Json = nlohmann::ordered_json;

namespace {

const std::vector<KeySpec>& all_keys() {
  static const std::vector<KeySpec> keys = {
      {"model", "cl", "cl | runged | ssh | trivial-chain | trivial-ladder"},
      {"N", "2", "number of domains"},
      {"ell", "4", "inner domain length"},
      {"L", "13", "length of trivial chains and ladders"},
      {"J", "1", "hopping (CL, trivial) or strong bond w (SSH)"},
      {"protocol", "lr", "lr | ls | trivial | superposition | superposition-line | prepare"},
      {"eps-tr", "", "uniform transfer control (default 1 for CL, 0.5 for SSH)"},
      {"controls", "", "per-domain controls, comma separated (outer half is mirrored when shorter)"},
      {"t-prep", "", "pulse ramp time (default 30 for CL, 15 for SSH)"},
      {"t-tr", "0", "transfer time; 0 searches for the optimum"},
      {"auto-time", "false", "search the optimal transfer time", true},
      {"f0", "0.995", "fidelity threshold"},
      {"dt", "0.1", "time step"},
      {"t-max", "0", "search horizon; 0 picks one from the model"},
      {"wall", "1", "target wall k of an ls transfer"},
      {"barrier-side", "left", "ls source end: left (barrier in k+1) or right (barrier in k)"},
      {"eps-bar", "20", "barrier height"},
      {"t-prep-bar", "30", "barrier ramp time"},
      {"mu0", "10", "well depth of trivial protocols"},
      {"start-rung", "1", "rung of the prepared particle"},
      {"start-leg", "A", "leg of the prepared particle"},
      {"ramp", "60", "bond ramp time of state preparation"},
      {"disorder", "none", "none | symmetry-preserving | general"},
      {"dJ", "0", "bond disorder strength"},
      {"dmu", "0", "on-site disorder strength"},
      {"seed", "1", "random seed"},
      {"record", "false", "record occupations every step", true},
      {"stride", "1", "keep every n-th recorded step (the last step is always kept)"},
      {"kind", "symmetry-preserving", "disorder kind of a sweep"},
      {"levels", "0:0.2:9", "disorder levels, start:stop:count or a list"},
      {"M", "100", "realizations per level"},
      {"jobs", "0", "worker threads; 0 uses every core"},
      {"series", "fixed-ell", "single-domain | two-domain | fixed-ell"},
      {"n-min", "2", "first N (fixed-ell) or ell (single-domain, two-domain)"},
      {"n-max", "6", "last N or ell"},
      {"box", "0.2", "relative half-width of the optimizer box"},
      {"compact", "false", "dump compact instead of hybridized states", true},
      {"output", "", "output file"},
      {"format", "csv", "csv | json"},
  };
  return keys;
}

std::vector<KeySpec> keys_for(std::initializer_list<const char*> names) {
  std::vector<KeySpec> out;
  for (const char* n : names)
    for (const auto& k : all_keys())
      if (k.name == n) out.push_back(k);
  return out;
}

const std::vector<KeySpec> kModelKeys = keys_for({"model", "N", "ell", "L", "J"});

std::vector<KeySpec> merge(std::vector<KeySpec> a, const std::vector<KeySpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::vector<KeySpec> kRunKeys = merge(
    kModelKeys, keys_for({"protocol", "eps-tr", "controls", "t-prep", "t-tr", "auto-time", "f0", "dt", "t-max", "wall",
                          "barrier-side", "eps-bar", "t-prep-bar", "mu0", "start-rung", "start-leg", "ramp", "disorder",
                          "dJ", "dmu", "seed", "record", "stride", "output", "format"}));
const std::vector<KeySpec> kSweepKeys = merge(
    kModelKeys, keys_for({"protocol", "eps-tr", "controls", "t-prep", "t-tr", "f0", "dt", "t-max", "wall",
                          "barrier-side", "eps-bar", "t-prep-bar", "mu0", "kind", "levels", "M", "seed", "jobs",
                          "output", "format"}));
const std::vector<KeySpec> kScanKeys =
    keys_for({"model", "series", "ell", "n-min", "n-max", "eps-tr", "t-prep", "f0", "dt", "output", "format"});
const std::vector<KeySpec> kOptimizeKeys =
    merge(kModelKeys, keys_for({"eps-tr", "t-prep", "f0", "dt", "box", "t-max", "output", "format"}));
const std::vector<KeySpec> kStatesKeys = merge(kModelKeys, keys_for({"eps-tr", "controls", "compact", "output", "format"}));
const std::vector<KeySpec> kSpectrumKeys =
    merge(kModelKeys, keys_for({"eps-tr", "controls", "disorder", "dJ", "dmu", "seed", "output", "format"}));

bool is_superposition_line(const Config& c) { return c.str("protocol") == "superposition-line"; }

LatticeSpec build_spec(const Config& c) {
  const ModelKind kind = model_kind_from_string(c.str("model"));
  const double J = c.real("J");
  LatticeSpec spec;
  switch (kind) {
    case ModelKind::CreutzImbalanced: spec = LatticeSpec::creutz(c.integer("N"), c.integer("ell"), J); break;
    case ModelKind::CreutzRunged: spec = LatticeSpec::runged(c.integer("N"), c.integer("ell"), J); break;
    case ModelKind::SSH: spec = LatticeSpec::ssh(c.integer("N"), c.integer("ell"), J); break;
    case ModelKind::TrivialChain: spec = LatticeSpec::trivial_chain(c.integer("L"), J); break;
    case ModelKind::TrivialLadder: spec = LatticeSpec::trivial_ladder(c.integer("L"), J); break;
  }
  if (c.known("protocol") && is_superposition_line(c)) spec.split_ends = true;
  spec.validate();
  return spec;
}

double control_value(const Config& c, const LatticeSpec& spec) {
  if (!c.str("eps-tr").empty()) return c.real("eps-tr");
  return spec.kind == ModelKind::SSH ? 0.5 : 1.0;
}

double prep_time(const Config& c, const LatticeSpec& spec) {
  if (!c.str("t-prep").empty()) return c.real("t-prep");
  return spec.is_trivial() ? 30.0 : default_t_prep(spec);
}

ControlVector plan_controls(const Config& c, const LatticeSpec& spec) {
  const int N = spec.domains;
  if (!c.known("controls") || c.str("controls").empty()) return ControlVector::uniform(N, control_value(c, spec));
  const std::vector<double> v = c.reals("controls");
  if (v.size() == static_cast<std::size_t>(N)) return ControlVector{v, {}, {}, {}};
  if (v.size() == static_cast<std::size_t>((N + 1) / 2)) return ControlVector::mirrored(N, v);
  throw ValidationError("controls needs N or ceil(N/2) values");
}

DisorderRealization disorder_from(const Config& c, const LatticeSpec& spec) {
  const DisorderKind kind = disorder_kind_from_string(c.str("disorder"));
  if (kind == DisorderKind::None) return {};
  return sample_disorder(spec, kind, c.real("dJ"), c.real("dmu"), c.unsigned_integer("seed"));
}

double horizon(const Config& c, const LatticeSpec& spec, double tp) {
  if (c.real("t-max") > 0.0) return c.real("t-max");
  if (spec.domains <= 2 && !spec.is_trivial()) return 3.0 * predict_transfer_time(spec, control_value(c, spec)) + 2.0 * tp + 200.0;
  return 1e4;
}

using Runner = std::function<ProtocolResult(const DisorderRealization&, const RunOptions&)>;

struct Prepared {
  Runner run;
  double t_tr = 0.0;
};

// Resolves the protocol and, when asked for, its pristine optimal time.
Prepared prepare_protocol(const Config& c, const LatticeSpec& spec) {
  const std::string protocol = c.str("protocol");
  const double dt = c.real("dt");
  const double f0 = c.real("f0");
  const bool auto_time = c.real("t-tr") <= 0.0 || (c.known("auto-time") && c.boolean("auto-time"));
  Prepared p;
  if (protocol == "lr" || protocol == "ls") {
    ProtocolPlan plan;
    plan.controls = plan_controls(c, spec);
    plan.t_prep = prep_time(c, spec);
    plan.f0 = f0;
    BarrierPlan barrier;
    const int k = c.integer("wall");
    if (protocol == "ls") {
      const std::string side = c.str("barrier-side");
      if (side != "left" && side != "right") throw ValidationError("barrier-side must be left or right");
      barrier = {side == "left" ? k + 1 : k, c.real("eps-bar"), c.real("t-prep-bar")};
    }
    plan.t_tr = c.real("t-tr");
    if (auto_time) {
      const StateVector target = compact_state(protocol == "lr" ? BoundaryStateId::right() : BoundaryStateId::s(k), spec);
      const bool from_left = protocol == "lr" || barrier.domain == k + 1;
      const StateVector source = compact_state(from_left ? BoundaryStateId::left() : BoundaryStateId::right(), spec);
      const PlateauProgram program = protocol == "lr" ? lr_program(spec, plan) : ls_program(spec, k, plan, barrier);
      const PlateauScan scan(program, lattice_hamiltonian(spec), source, target, dt);
      const double extra = protocol == "ls" ? 2.0 * barrier.t_prep : 0.0;
      const OptimalTime best = find_optimal_time(scan, {f0, 0.0, horizon(c, spec, plan.t_prep) + extra, dt});
      plan.t_tr = best.t_tr - extra;
    }
    p.t_tr = plan.t_tr;
    if (protocol == "lr")
      p.run = [spec, plan](const DisorderRealization& d, const RunOptions& o) { return run_lr_transfer(spec, plan, d, o); };
    else
      p.run = [spec, plan, k, barrier](const DisorderRealization& d, const RunOptions& o) {
        return run_ls_transfer(spec, k, plan, barrier, d, o);
      };
    return p;
  }
  if (protocol == "trivial") {
    const double mu0 = c.real("mu0");
    double t = c.real("t-tr");
    if (auto_time) {
      const double t_max = c.real("t-max") > 0.0 ? c.real("t-max") : 1e4;
      t = find_optimal_time([&](double T) { return run_trivial_transfer(spec, mu0, T, {}, {dt}).fidelity; },
                            {f0, 10.0, t_max, dt})
              .t_tr;
    }
    p.t_tr = t;
    p.run = [spec, mu0, t](const DisorderRealization& d, const RunOptions& o) {
      return run_trivial_transfer(spec, mu0, t, d, o);
    };
    return p;
  }
  if (protocol == "superposition") {
    SuperpositionPlan plan;
    if (!c.str("controls").empty()) plan.stage_controls = c.reals("controls");
    if (!c.str("t-prep").empty()) plan.t_prep = c.real("t-prep");
    plan.barrier_t_prep = c.real("t-prep-bar");
    plan.barrier_height = c.real("eps-bar");
    if (c.real("t-tr") > 0.0) plan.total_time = c.real("t-tr");
    p.t_tr = plan.total_time;
    p.run = [spec, plan](const DisorderRealization& d, const RunOptions& o) {
      return run_superposition_transfer(spec, plan, d, o);
    };
    return p;
  }
  if (protocol == "superposition-line") {
    const double mu0 = c.real("mu0");
    const double total = c.real("t-tr") > 0.0 ? c.real("t-tr") : 2405.6;
    p.t_tr = total;
    p.run = [spec, mu0, total](const DisorderRealization& d, const RunOptions& o) {
      return run_superposition_line(spec, mu0, total, d, o);
    };
    return p;
  }
  if (protocol == "prepare") {
    const std::string leg = c.str("start-leg");
    if (leg != "A" && leg != "B") throw ValidationError("start-leg must be A or B");
    const SiteIndex start{c.integer("start-rung"), leg == "A" ? Leg::A : Leg::B};
    const double ramp = c.real("ramp");
    p.t_tr = ramp;
    p.run = [spec, start, ramp](const DisorderRealization&, const RunOptions& o) {
      return run_state_preparation(spec, start, ramp, o);
    };
    return p;
  }
  throw ValidationError("unknown protocol '" + protocol + "'");
}

void emit(const Config& c, const std::string& csv, const Json& json_body) {
  const std::string path = c.str("output");
  const std::string format = c.str("format");
  if (format != "csv" && format != "json") throw ValidationError("format must be csv or json");
  if (path.empty()) return;
  cli::write_text(path, format == "csv" ? csv : json_body.dump(2) + "\n");
}

std::uint64_t seed_of(const Config& c) { return c.known("seed") ? c.unsigned_integer("seed") : 0; }

int cmd_run(const Config& c) {
  const LatticeSpec spec = build_spec(c);
  const Prepared p = prepare_protocol(c, spec);
  RunOptions options;
  options.dt = c.real("dt");
  options.record = c.boolean("record") || !c.str("output").empty();
  const int stride = c.integer("stride");
  if (stride < 1) throw ValidationError("stride must be at least 1");
  ProtocolResult r = p.run(disorder_from(c, spec), options);
  if (stride > 1 && !r.occupations.empty()) {
    std::vector<OccupationSample> kept;
    for (std::size_t i = 0; i < r.occupations.size(); ++i)
      if (i % stride == 0 || i + 1 == r.occupations.size()) kept.push_back(r.occupations[i]);
    r.occupations = std::move(kept);
  }
  std::printf("fidelity=%.6f phase=%.6f t_tr=%.1f\n", r.fidelity, r.acquired_phase, r.timing.t_tr);
  Json j;
  j["meta"] = cli::meta_block(c, seed_of(c));
  j["summary"] = {{"fidelity", r.fidelity},
                  {"phase", r.acquired_phase},
                  {"amplitude_re", r.amplitude.real()},
                  {"amplitude_im", r.amplitude.imag()},
                  {"t_tr", r.timing.t_tr},
                  {"dt", r.timing.dt}};
  j["trajectory"] = cli::trajectory_json(r.occupations);
  emit(c, cli::trajectory_csv(r.occupations), j);
  return 0;
}

int cmd_sweep(const Config& c) {
  const LatticeSpec spec = build_spec(c);
  const Prepared p = prepare_protocol(c, spec);
  const DisorderKind kind = disorder_kind_from_string(c.str("kind"));
  int jobs = c.integer("jobs");
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  RunOptions options;
  options.dt = c.real("dt");
  const Runner run = p.run;
  const SweepReport rep = disorder_sweep(
      spec, [&](const DisorderRealization& d) { return run(d, options); }, kind, cli::parse_levels(c.str("levels")),
      c.integer("M"), c.unsigned_integer("seed"), jobs);
  for (std::size_t i = 0; i < rep.levels.size(); ++i)
    std::printf("level=%.4f mean_fidelity=%.6f std_fidelity=%.6f phase_circ_std=%.6f\n", rep.levels[i],
                rep.mean_fidelity[i], rep.std_fidelity[i], rep.phase_circ_std[i]);
  Json j;
  j["meta"] = cli::meta_block(c, rep.master_seed);
  j["t_tr"] = p.t_tr;
  j["kind"] = to_string(kind);
  j["sweep"] = cli::sweep_json(rep);
  emit(c, cli::sweep_csv(rep), j);
  return 0;
}

int cmd_scan(const Config& c) {
  LengthScanOptions o;
  o.kind = model_kind_from_string(c.str("model"));
  o.control = !c.str("eps-tr").empty() ? c.real("eps-tr") : (o.kind == ModelKind::SSH ? 0.5 : 1.0);
  o.t_prep = c.str("t-prep").empty() ? -1.0 : c.real("t-prep");
  o.f0 = c.real("f0");
  o.dt = c.real("dt");
  o.fixed_inner = c.integer("ell");
  const LengthSeries series = length_series_from_string(c.str("series"));
  const LengthScan scan = length_scan(series, c.integer("n-min"), c.integer("n-max"), o);
  for (const auto& p : scan.points) std::printf("L=%d t_tr=%.1f fidelity=%.6f\n", p.length, p.t_tr, p.fidelity);
  std::printf("fit t0=%.4f A0=%.4f log_slope=%.6f\n", scan.fit.intercept, scan.fit.slope, scan.log_fit.slope);
  Json j;
  j["meta"] = cli::meta_block(c, 0);
  Json pts = Json::array();
  for (const auto& p : scan.points)
    pts.push_back({{"L", p.length}, {"N", p.domains}, {"ell", p.inner}, {"t_tr", p.t_tr}, {"fidelity", p.fidelity}});
  j["points"] = pts;
  j["fit"] = {{"t0", scan.fit.intercept}, {"A0", scan.fit.slope}};
  j["log_fit"] = {{"intercept", scan.log_fit.intercept}, {"slope", scan.log_fit.slope}};
  emit(c, cli::length_csv(scan), j);
  return 0;
}

int cmd_optimize(const Config& c) {
  const LatticeSpec spec = build_spec(c);
  OptimizerOptions o;
  o.t_prep = c.str("t-prep").empty() ? -1.0 : c.real("t-prep");
  o.box = c.real("box");
  o.dt = c.real("dt");
  o.t_max = c.real("t-max");
  const OptimizedPlan best = optimize_controls(spec, control_value(c, spec), c.real("f0"), o);
  std::printf("controls=");
  for (std::size_t d = 0; d < best.plan.controls.per_domain.size(); ++d)
    std::printf("%s%.3f", d ? "," : "", best.plan.controls.per_domain[d]);
  std::printf(" t_tr=%.1f fidelity=%.6f t_peak=%.1f\n", best.plan.t_tr, best.fidelity, best.t_peak);
  Json j;
  j["meta"] = cli::meta_block(c, 0);
  j["controls"] = best.plan.controls.per_domain;
  j["t_tr"] = best.plan.t_tr;
  j["fidelity"] = best.fidelity;
  j["t_peak"] = best.t_peak;
  j["peak_fidelity"] = best.peak_fidelity;
  emit(c, cli::controls_csv(best.plan.controls.per_domain), j);
  return 0;
}

int cmd_states(const Config& c) {
  const LatticeSpec spec = build_spec(c);
  const ControlVector controls = plan_controls(c, spec);
  const std::vector<BoundaryStateId> labels = chain_labels(spec);
  std::vector<StateVector> states;
  for (const auto& id : labels)
    states.push_back(c.boolean("compact") ? compact_state({id.kind, id.k, Extension::Compact}, spec)
                                          : hybridized_state(id, spec, controls));
  std::printf("states=%zu sites=%ld\n", states.size(), static_cast<long>(spec.site_count()));
  Json j;
  j["meta"] = cli::meta_block(c, 0);
  Json rows = Json::array();
  for (std::size_t k = 0; k < states.size(); ++k) {
    Json amps = Json::array();
    for (Index s = 0; s < states[k].size(); ++s) amps.push_back({states[k](s).real(), states[k](s).imag()});
    rows.push_back({{"state", to_string(labels[k])}, {"amplitudes", amps}});
  }
  j["states"] = rows;
  emit(c, cli::states_csv(labels, states), j);
  return 0;
}

int cmd_spectrum(const Config& c) {
  const LatticeSpec spec = build_spec(c);
  const HamiltonianMatrix h = assemble_hamiltonian(spec, plan_controls(c, spec), disorder_from(c, spec));
  const RealVector e = spectrum(h);
  const int zero = count_zero_modes(h, 1e-10);
  std::printf("sites=%ld zero_modes=%d\n", static_cast<long>(e.size()), zero);
  Json j;
  j["meta"] = cli::meta_block(c, seed_of(c));
  j["zero_modes"] = zero;
  j["energies"] = std::vector<double>(e.data(), e.data() + e.size());
  emit(c, cli::spectrum_csv(e), j);
  return 0;
}

struct Command {
  CLI::App* app;
  std::vector<KeySpec> keys;
  std::function<int(const Config&)> body;
  std::string config_path;
  std::map<std::string, std::string> raw;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for topological transfer protocols in multidomain Creutz ladders and SSH chains"};
  app.set_version_flag("--version", std::string(DWALL_VERSION));
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](const std::string& name, const std::string& help, const std::vector<KeySpec>& keys,
                 std::function<int(const Config&)> body) {
    auto cmd = std::make_unique<Command>();
    cmd->app = app.add_subcommand(name, help);
    cmd->keys = keys;
    cmd->body = std::move(body);
    cmd->app->add_option("--config", cmd->config_path, "key = value configuration file")->check(CLI::ExistingFile);
    for (const auto& k : cmd->keys) {
      std::string* slot = &cmd->raw[k.name];
      if (k.flag)
        cmd->app->add_flag_callback("--" + k.name, [slot] { *slot = "true"; }, k.help);
      else
        cmd->app->add_option("--" + k.name, *slot, k.help + (k.fallback.empty() ? "" : " [" + k.fallback + "]"));
    }
    commands.push_back(std::move(cmd));
  };
  add("run", "run one protocol", kRunKeys, cmd_run);
  add("sweep", "disorder sweep of one protocol", kSweepKeys, cmd_sweep);
  add("scan-length", "transfer time against system length", kScanKeys, cmd_scan);
  add("optimize", "per-domain controls with the earliest transfer", kOptimizeKeys, cmd_optimize);
  add("states", "dump analytic protected states", kStatesKeys, cmd_states);
  add("spectrum", "eigenvalues and zero-mode count", kSpectrumKeys, cmd_spectrum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    for (auto& cmd : commands) {
      if (!cmd->app->parsed()) continue;
      Config config(cmd->keys);
      if (!cmd->config_path.empty()) cli::load_config_file(config, cmd->config_path);
      for (const auto& k : cmd->keys)
        if (cmd->app->count("--" + k.name) > 0) config.set(k.name, cmd->raw[k.name]);
      return cmd->body(config);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IndexError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << " (best fidelity " << e.best_fidelity << " at t=" << e.best_time << ")\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const OptimizationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UnreliablePhaseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
