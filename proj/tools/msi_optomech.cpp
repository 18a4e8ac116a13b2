#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msi/config.hpp"
#include "msi/errors.hpp"
#include "msi/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Frequency-domain model of an optomechanical Michelson-Sagnac interferometer"};
  std::string command;
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;

  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember(msi::commands()));
  app.add_option("--config", config_path, "Configuration file (key = value)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--set", overrides, "Override one key, key=value (repeatable)")
      ->allow_extra_args(false);
  app.set_version_flag("--version", msi::kToolVersion);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  msi::ModelConfig config;
  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot read config " << config_path << "\n";
        return 1;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    config = msi::parse_config(text);
    for (const std::string& o : overrides) msi::apply_override(config, o);
  } catch (const msi::ParseError& e) {
    std::cerr << (config_path.empty() ? "--set" : config_path) << ": " << e.what() << "\n";
    return 1;
  } catch (const msi::Error& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 1;
  }

  return msi::run(command, config, out_dir, std::cerr);
}
