// Command-line front end: morrey_lab [command] [--config FILE] [--key value ...]
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "morrey/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for Hardy, singular and maximal operators in Morrey spaces"};
  std::string command, config_path;
  app.add_option("command", command, "probe-hardy | probe-singular | threshold-sweep | verify-inequality | "
                                     "curve-diagnostics | morrey-norm | weight-indices");
  app.add_option("--config", config_path, "key=value configuration file");
  std::map<std::string, std::string> flags;
  for (const std::string& key : morrey::config_keys()) {
    if (key == "command") continue;
    app.add_option("--" + key, flags[key], key);
  }
  CLI11_PARSE(app, argc, argv);

  try {
    morrey::RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      morrey::require(static_cast<bool>(in), morrey::ErrorCode::io_error, "cannot read config '" + config_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      cfg = morrey::parse_config_text(buf.str());
    }
    if (!command.empty()) cfg.set("command", command);
    for (const auto& [key, value] : flags)
      if (app.count("--" + key)) cfg.set(key, value);
    morrey::validate_config(cfg);
    return morrey::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
