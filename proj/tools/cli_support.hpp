#pragma once

#include "dwall/analysis.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace dwall::cli {

struct KeySpec {
  std::string name;
  std::string fallback;
  std::string help;
  bool flag = false;
};

// Flat key=value settings checked against a schema. Later sources win.
class Config {
 public:
  explicit Config(std::vector<KeySpec> schema);

  const std::vector<KeySpec>& schema() const { return schema_; }
  bool known(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  bool explicitly_set(const std::string& key) const { return values_.count(key) > 0; }

  std::string str(const std::string& key) const;
  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  // Every key with its effective value, schema order.
  std::vector<std::pair<std::string, std::string>> effective() const;

 private:
  std::vector<KeySpec> schema_;
  std::map<std::string, std::string> values_;
};

// "key = value" lines; '#' starts a comment. Unknown keys throw ValidationError.
void load_config_text(Config& config, const std::string& text);
void load_config_file(Config& config, const std::string& path);

// "a:b:n" (n evenly spaced points) or a comma separated list.
std::vector<double> parse_levels(const std::string& text);
std::vector<double> parse_list(const std::string& text);

std::string format_real(double x);

std::string trajectory_csv(const std::vector<OccupationSample>& samples);
std::vector<OccupationSample> parse_trajectory_csv(const std::string& text);

std::string sweep_csv(const SweepReport& report);
SweepReport parse_sweep_csv(const std::string& text);

std::string length_csv(const LengthScan& scan);
std::string controls_csv(const std::vector<double>& controls);
std::string states_csv(const std::vector<BoundaryStateId>& labels, const std::vector<StateVector>& states);
std::string spectrum_csv(const RealVector& energies);

nlohmann::ordered_json meta_block(const Config& config, std::uint64_t seed);
nlohmann::ordered_json trajectory_json(const std::vector<OccupationSample>& samples);
nlohmann::ordered_json sweep_json(const SweepReport& report);
SweepReport sweep_from_json(const nlohmann::ordered_json& j);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace dwall::cli
