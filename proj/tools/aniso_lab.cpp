#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "aniso/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic singular p-Laplace laboratory"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "flat key = value config file");
  app.add_option("--set", overrides, "key=value override (repeatable)");

  // One flag per config key, e.g. --grid.res 64 or --p 2,3,4.
  std::map<std::string, std::string> flags;
  for (const auto& [key, def] : aniso::RunConfig::defaults()) {
    app.add_option("--" + key, flags[key], "default: " + (def.empty() ? "(unset)" : def));
  }

  for (const char* name : {"thresholds", "truncation-check", "solve", "stability", "sweep"}) {
    app.add_subcommand(name)->fallthrough();
  }
  CLI11_PARSE(app, argc, argv);

  try {
    aniso::RunConfig cfg = config_path.empty() ? aniso::RunConfig{}
                                               : aniso::RunConfig::load(config_path);
    for (const auto& [key, value] : flags) {
      if (app.count("--" + key) > 0) cfg.set(key, value);
    }
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "--set expects key=value, got '" << kv << "'\n";
        return aniso::kExitValidation;
      }
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return aniso::run(app.get_subcommands().front()->get_name(), cfg, std::cout, std::cerr);
  } catch (const aniso::Error& ex) {
    std::cerr << ex.what() << '\n';
    return aniso::exit_code_for(ex.kind());
  }
}
