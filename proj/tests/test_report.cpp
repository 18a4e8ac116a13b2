#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "msi/config.hpp"
#include "msi/report.hpp"

using namespace msi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("msi_report_" + name);
  fs::remove_all(dir);
  return dir;
}

ModelConfig small_config() {
  ModelConfig c = parse_config("");
  c.sweep_points = 20;
  c.spectrum_points = 50;
  c.spectrum_resonance_points = 21;
  c.verify_samples = 5;
  c.epsilon_step = 1e-2;
  return c;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("every command writes its files with the documented headers") {
  const fs::path dir = scratch("all");
  std::ostringstream err;
  const ModelConfig c = small_config();
  for (const std::string& cmd : commands()) {
    INFO(cmd << ": " << err.str());
    CHECK(run(cmd, c, dir, err) == 0);
  }
  CHECK(first_line(dir / "couplings.csv") ==
        "epsilon,T_msi,xi_per_m,eta_per_m,X,H,omega_M_Hz,kappa_M_Hz");
  for (const char* f : {"cooling_srm_baseline", "cooling_srm_tuned", "cooling_prm_baseline",
                        "cooling_prm_tuned"}) {
    CHECK(first_line(dir / (std::string(f) + ".csv")) == "gamma0_Hz,n_T,kappa_M_Hz,stable");
  }
  CHECK(first_line(dir / "qrpn_budget.csv") == "Omega_Hz,S_shot,S_CC,S_BB,S_thermal,S_total");
  CHECK(first_line(dir / "squeeze_spectrum.csv") == "Omega_Hz,S_C,S_B,S_thermal,S_out");
  CHECK(first_line(dir / "optimize_epsilon.csv") == "epsilon,kappa_M_Hz,n_T");
  CHECK(first_line(dir / "verify.csv") == "check,max_deviation,tolerance,passed,samples");
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().extension() != ".tmp");
  }
}

TEST_CASE("summary carries the scalars and a re-parseable config echo") {
  const fs::path dir = scratch("summary");
  std::ostringstream err;
  ModelConfig c = small_config();
  c.topology = Topology::prm;
  c.Q = 2.5e6;
  REQUIRE(run("squeeze-spectrum", c, dir, err) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "squeeze_spectrum.json"));
  for (const char* key : {"epsilon_opt", "epsilon_max", "omega_sq_Hz", "Gamma_sq_Hz", "min_n_T",
                          "separation", "config", "tool_version", "warnings"}) {
    CHECK(j.contains(key));
  }
  CHECK(parse_config(j["config"].get<std::string>()) == c);
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream err;
  const ModelConfig c = small_config();
  for (const char* cmd : {"cooling-curve", "qrpn-budget", "verify"}) {
    REQUIRE(run(cmd, c, a, err) == 0);
    REQUIRE(run(cmd, c, b, err) == 0);
  }
  for (const auto& entry : fs::directory_iterator(a)) {
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  }
}

TEST_CASE("domain errors at the configured point exit with 1") {
  const fs::path dir = scratch("errors");
  std::ostringstream err;
  ModelConfig c = small_config();
  c.epsilon_mode = EpsilonMode::fixed;
  c.epsilon = 0.999;
  CHECK(run("qrpn-budget", c, dir, err) == 1);
  CHECK(err.str().find("epsilon_max") != std::string::npos);
  CHECK(run("no-such-command", small_config(), dir, err) == 1);
}

TEST_CASE("atomic write replaces the target") {
  const fs::path dir = scratch("atomic");
  fs::create_directories(dir);
  write_atomic(dir / "x.txt", "one");
  write_atomic(dir / "x.txt", "two");
  CHECK(slurp(dir / "x.txt") == "two");
  CHECK(!fs::exists(dir / "x.txt.tmp"));
}

}
