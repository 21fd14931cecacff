#include "cli_support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using namespace dwall;
using namespace dwall::cli;

namespace {

Config sample_config() {
  return Config({{"N", "2", "domains"}, {"eps-tr", "1", "control"}, {"record", "false", "", true}, {"seed", "1", ""}});
}

int tool(const std::string& args) {
  const std::string cmd = std::string(DWALL_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config text") {
  Config c = sample_config();
  load_config_text(c, "# comment\nN = 4   # trailing\n\neps-tr=0.969\nrecord = true\n");
  CHECK(c.integer("N") == 4);
  CHECK(c.real("eps-tr") == 0.969);
  CHECK(c.boolean("record"));
  CHECK(c.unsigned_integer("seed") == 1u);
  CHECK(c.explicitly_set("N"));
  CHECK_FALSE(c.explicitly_set("seed"));
  c.set("N", "5");
  CHECK(c.integer("N") == 5);
  CHECK(c.effective().size() == 4u);
}

TEST_CASE("config rejects unknown keys and bad values") {
  Config c = sample_config();
  CHECK_THROWS_AS(load_config_text(c, "N = 2\nflux = 3\n"), ValidationError);
  try {
    load_config_text(c, "N = 2\nflux = 3\n");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config_text(c, "just words\n"), ValidationError);
  CHECK_THROWS_AS(c.set("nope", "1"), ValidationError);
  c.set("N", "2.5");
  CHECK_THROWS_AS(c.integer("N"), ValidationError);
  c.set("eps-tr", "abc");
  CHECK_THROWS_AS(c.real("eps-tr"), ValidationError);
  c.set("seed", "-3");
  CHECK_THROWS_AS(c.unsigned_integer("seed"), ValidationError);
  c.set("record", "maybe");
  CHECK_THROWS_AS(c.boolean("record"), ValidationError);
}

TEST_CASE("levels") {
  CHECK(parse_levels("0:0.2:5") == std::vector<double>{0.0, 0.05, 0.1, 0.15000000000000002, 0.2});
  CHECK(parse_levels("0.1,0.3") == std::vector<double>{0.1, 0.3});
  CHECK(parse_levels("0.7:1:1") == std::vector<double>{0.7});
  CHECK_THROWS_AS(parse_levels("0:1"), ValidationError);
  CHECK_THROWS_AS(parse_levels("0:1:2.5"), ValidationError);
  CHECK(parse_list("").empty());
}

TEST_CASE("17-digit output round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 2288679.9, 1e-300, -kPi}) CHECK(std::stod(format_real(x)) == x);
}

TEST_CASE("trajectory and sweep files round-trip") {
  std::vector<OccupationSample> samples(2);
  samples[0].t = 0.1;
  samples[0].rungs = RealVector::LinSpaced(3, 0.0, 1.0 / 3.0);
  samples[1].t = 0.2;
  samples[1].rungs = RealVector::Constant(3, 1.0 / 7.0);
  const auto back = parse_trajectory_csv(trajectory_csv(samples));
  REQUIRE(back.size() == 2u);
  CHECK(back[1].t == 0.2);
  CHECK(back[0].rungs == samples[0].rungs);
  CHECK(back[1].rungs == samples[1].rungs);
  CHECK_THROWS_AS(parse_trajectory_csv("x,y\n"), ValidationError);

  SweepReport r;
  r.levels = {0.0, 0.05};
  r.mean_fidelity = {0.99912345678901234, 0.9};
  r.std_fidelity = {0.0, 0.01};
  r.phase_circ_std = {1e-9, 0.3};
  r.realizations = 200;
  const SweepReport c = parse_sweep_csv(sweep_csv(r));
  CHECK(c.mean_fidelity == r.mean_fidelity);
  CHECK(c.phase_circ_std == r.phase_circ_std);
  CHECK(c.realizations == 200);
  const SweepReport j = sweep_from_json(nlohmann::ordered_json::parse(sweep_json(r).dump()));
  CHECK(j.mean_fidelity == r.mean_fidelity);
  CHECK(j.std_fidelity == r.std_fidelity);
}

TEST_CASE("other writers") {
  CHECK(controls_csv({1.0, 0.952}) == "domain,control\n1,1\n2,0.95199999999999996\n");
  RealVector e(2);
  e << -1.0, 0.5;
  CHECK(spectrum_csv(e) == "index,energy\n0,-1\n1,0.5\n");
  const auto meta = meta_block(sample_config(), 42);
  CHECK(meta["seed"] == 42);
  CHECK_FALSE(meta["config"].contains("output"));
  CHECK(meta["config"]["N"] == "2");
}

TEST_CASE("tool exit codes and outputs") {
  const auto dir = std::filesystem::temp_directory_path() / "dwall_cli_test";
  std::filesystem::create_directories(dir);
  CHECK(tool("--version") == 0);
  CHECK(tool("run --N 2 --t-tr 111.2") == 0);
  CHECK(tool("run --bogus 1") == 2);
  CHECK(tool("run --N 0 --t-tr 100") == 2);
  CHECK(tool("run --model ssh --ell 3 --t-tr 100") == 2);
  CHECK(tool("run --N 2 --auto-time --t-max 50") == 3);
  CHECK(tool("spectrum --N 2 --eps-tr 0 --output " + (dir / "s.csv").string()) == 0);
  const std::string s = read_text((dir / "s.csv").string());
  CHECK(s.rfind("index,energy\n", 0) == 0);

  write_text((dir / "bad.cfg").string(), "N = 2\nwhatever = 1\n");
  CHECK(tool("run --config " + (dir / "bad.cfg").string()) == 2);
  write_text((dir / "good.cfg").string(), "N = 2\nt-tr = 111.2\nformat = json\n");
  CHECK(tool("run --config " + (dir / "good.cfg").string() + " --output " + (dir / "r.json").string()) == 0);
  const auto j = nlohmann::ordered_json::parse(read_text((dir / "r.json").string()));
  CHECK(j["summary"]["fidelity"].get<double>() > 0.995);
  CHECK(j["meta"]["config"]["N"] == "2");
  std::filesystem::remove_all(dir);
}
