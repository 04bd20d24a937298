#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ehcss/cli.hpp"

namespace {

// Ergonomic flags and the config key each one overrides. Flags beat config
// file values; the generic --set covers every remaining key.
struct Shortcut {
  const char* flag;
  const char* key;
  const char* help;
  std::string value;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage evaluation for energy-harvesting cooperative spectrum sharing"};
  app.set_version_flag("--version", ehcss::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::vector<Shortcut> shortcuts = {
      {"--engine", "sweep.engine", "analytic | montecarlo | both", {}},
      {"--seed", "montecarlo.seed", "simulation seed (required to simulate)", {}},
      {"--trials", "montecarlo.trials", "simulation trials per point", {}},
      {"--output", "output.path", "CSV output path", {}},
      {"--protocol", "point.protocol", "ts | ps", {}},
      {"--relaying", "point.relaying", "df | af", {}},
      {"--alpha", "point.alpha", "relay share of the transmission slot", {}},
      {"--beta", "point.beta", "harvest share", {}},
      {"--variable", "sweep.variable",
       "alpha | beta | eta | distance_d | snr_db", {}},
      {"--grid", "sweep.grid", "comma-separated sweep grid", {}},
      {"--snr-db", "system.snr_db", "transmit SNR in dB", {}},
      {"--m", "system.m", "fading shape", {}},
      {"--eta", "system.eta", "harvesting efficiency", {}},
  };

  CLI::App* eval = app.add_subcommand("eval", "Evaluate one operating point");
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one variable and write CSV");
  CLI::App* validate =
      app.add_subcommand("validate", "Cross-check the engines on the reference grid");
  for (CLI::App* sub : {eval, sweep, validate}) {
    sub->add_option("--config", config_path, "Config file ([system]/[point]/... sections)");
    sub->add_option("--set", overrides, "Override as section.key=value (repeatable)");
    for (Shortcut& shortcut : shortcuts)
      sub->add_option(shortcut.flag, shortcut.value, shortcut.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  CLI::App* sub = app.get_subcommands().front();

  ehcss::RunConfig config;
  const int setup = ehcss::run_guarded([&] {
    if (!config_path.empty()) ehcss::parse_config_file(config, config_path);
    for (const std::string& assignment : overrides)
      ehcss::apply_override(config, assignment);
    for (const Shortcut& shortcut : shortcuts)
      if (sub->count(shortcut.flag) > 0)
        ehcss::apply_override(config, std::string(shortcut.key) + "=" + shortcut.value);
    return 0;
  });
  if (setup != 0) return setup;

  const ehcss::Command command = sub == eval     ? ehcss::Command::Eval
                                 : sub == sweep ? ehcss::Command::Sweep
                                                : ehcss::Command::Validate;
  return ehcss::run_command(command, config);
}
