#include "cli_support.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dwall::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE) throw ValidationError("'" + key + "' expects a number, got '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.push_back("");
  return out;
}

}  // namespace

Config::Config(std::vector<KeySpec> schema) : schema_(std::move(schema)) {}

bool Config::known(const std::string& key) const {
  return std::any_of(schema_.begin(), schema_.end(), [&](const KeySpec& k) { return k.name == key; });
}

void Config::set(const std::string& key, const std::string& value) {
  if (!known(key)) throw ValidationError("unknown configuration key '" + key + "'");
  values_[key] = value;
}

std::string Config::str(const std::string& key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  for (const auto& k : schema_)
    if (k.name == key) return k.fallback;
  throw ValidationError("unknown configuration key '" + key + "'");
}

double Config::real(const std::string& key) const { return to_real(key, str(key)); }

int Config::integer(const std::string& key) const {
  const double v = real(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError("'" + key + "' expects an integer");
  return static_cast<int>(v);
}

std::uint64_t Config::unsigned_integer(const std::string& key) const {
  const std::string t = trim(str(key));
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE || t.front() == '-')
    throw ValidationError("'" + key + "' expects a non-negative integer");
  return v;
}

bool Config::boolean(const std::string& key) const {
  const std::string v = trim(str(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off" || v.empty()) return false;
  throw ValidationError("'" + key + "' expects true or false");
}

std::vector<double> Config::reals(const std::string& key) const { return parse_list(str(key)); }

std::vector<std::pair<std::string, std::string>> Config::effective() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : schema_) out.emplace_back(k.name, str(k.name));
  return out;
}

void load_config_text(Config& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!config.known(key))
      throw ValidationError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    config.set(key, trim(line.substr(eq + 1)));
  }
}

void load_config_file(Config& config, const std::string& path) { load_config_text(config, read_text(path)); }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(to_real("list", item));
  return out;
}

std::vector<double> parse_levels(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text);
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ValidationError("levels must look like start:stop:count");
  const double a = to_real("levels", parts[0]), b = to_real("levels", parts[1]);
  const double n = to_real("levels", parts[2]);
  if (n < 1 || n != std::floor(n)) throw ValidationError("levels count must be a positive integer");
  std::vector<double> out;
  const int count = static_cast<int>(n);
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  return out;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trajectory_csv(const std::vector<OccupationSample>& samples) {
  std::string out = "t,j,occupation\n";
  for (const auto& s : samples)
    for (Index j = 0; j < s.rungs.size(); ++j)
      out += format_real(s.t) + "," + std::to_string(j + 1) + "," + format_real(s.rungs(j)) + "\n";
  return out;
}

std::vector<OccupationSample> parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,j,occupation") throw ValidationError("not a trajectory file");
  std::vector<OccupationSample> out;
  std::vector<double> current;
  double t = 0.0;
  auto flush = [&] {
    if (current.empty()) return;
    OccupationSample s;
    s.t = t;
    s.rungs = Eigen::Map<RealVector>(current.data(), static_cast<Index>(current.size()));
    out.push_back(std::move(s));
    current.clear();
  };
  while (std::getline(in, line)) {
    const auto f = split(line, ',');
    if (f.size() != 3) throw ValidationError("malformed trajectory row");
    const double row_t = to_real("t", f[0]);
    const int j = static_cast<int>(to_real("j", f[1]));
    if (j == 1) flush();
    t = row_t;
    current.push_back(to_real("occupation", f[2]));
  }
  flush();
  return out;
}

std::string sweep_csv(const SweepReport& r) {
  std::string out = "level,mean_fidelity,std_fidelity,phase_circ_std,M\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i)
    out += format_real(r.levels[i]) + "," + format_real(r.mean_fidelity[i]) + "," + format_real(r.std_fidelity[i]) +
           "," + format_real(r.phase_circ_std[i]) + "," + std::to_string(r.realizations) + "\n";
  return out;
}

SweepReport parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "level,mean_fidelity,std_fidelity,phase_circ_std,M")
    throw ValidationError("not a sweep file");
  SweepReport r;
  while (std::getline(in, line)) {
    const auto f = split(line, ',');
    if (f.size() != 5) throw ValidationError("malformed sweep row");
    r.levels.push_back(to_real("level", f[0]));
    r.mean_fidelity.push_back(to_real("mean_fidelity", f[1]));
    r.std_fidelity.push_back(to_real("std_fidelity", f[2]));
    r.phase_circ_std.push_back(to_real("phase_circ_std", f[3]));
    r.realizations = static_cast<int>(to_real("M", f[4]));
  }
  return r;
}

std::string length_csv(const LengthScan& scan) {
  std::string out = "L,N,ell,t_tr,fidelity\n";
  for (const auto& p : scan.points)
    out += std::to_string(p.length) + "," + std::to_string(p.domains) + "," + std::to_string(p.inner) + "," +
           format_real(p.t_tr) + "," + format_real(p.fidelity) + "\n";
  return out;
}

std::string controls_csv(const std::vector<double>& controls) {
  std::string out = "domain,control\n";
  for (std::size_t d = 0; d < controls.size(); ++d) out += std::to_string(d + 1) + "," + format_real(controls[d]) + "\n";
  return out;
}

std::string states_csv(const std::vector<BoundaryStateId>& labels, const std::vector<StateVector>& states) {
  std::string out = "state,site,re,im\n";
  for (std::size_t k = 0; k < states.size(); ++k)
    for (Index s = 0; s < states[k].size(); ++s)
      out += to_string(labels[k]) + "," + std::to_string(s) + "," + format_real(states[k](s).real()) + "," +
             format_real(states[k](s).imag()) + "\n";
  return out;
}

std::string spectrum_csv(const RealVector& energies) {
  std::string out = "index,energy\n";
  for (Index n = 0; n < energies.size(); ++n) out += std::to_string(n) + "," + format_real(energies(n)) + "\n";
  return out;
}

nlohmann::ordered_json meta_block(const Config& config, std::uint64_t seed) {
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.effective())
    if (k != "output") echo[k] = v;
  return {{"seed", seed}, {"version", DWALL_VERSION}, {"config", echo}};
}

nlohmann::ordered_json trajectory_json(const std::vector<OccupationSample>& samples) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& s : samples)
    for (Index j = 0; j < s.rungs.size(); ++j) rows.push_back({{"t", s.t}, {"j", j + 1}, {"occupation", s.rungs(j)}});
  return rows;
}

nlohmann::ordered_json sweep_json(const SweepReport& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.levels.size(); ++i)
    rows.push_back({{"level", r.levels[i]},
                    {"mean_fidelity", r.mean_fidelity[i]},
                    {"std_fidelity", r.std_fidelity[i]},
                    {"phase_circ_std", r.phase_circ_std[i]},
                    {"M", r.realizations}});
  return rows;
}

SweepReport sweep_from_json(const nlohmann::ordered_json& j) {
  SweepReport r;
  for (const auto& row : j) {
    r.levels.push_back(row.at("level").get<double>());
    r.mean_fidelity.push_back(row.at("mean_fidelity").get<double>());
    r.std_fidelity.push_back(row.at("std_fidelity").get<double>());
    r.phase_circ_std.push_back(row.at("phase_circ_std").get<double>());
    r.realizations = row.at("M").get<int>();
  }
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace dwall::cli
