#ifndef EHCSS_CLI_HPP
#define EHCSS_CLI_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehcss/sweep.hpp"

namespace ehcss {

inline constexpr char kVersion[] = "1.0.0";

// Configuration problems: unreadable files, unknown keys, malformed values,
// missing required settings. Mapped to exit code 2, as opposed to numerical
// failures (3) and validation failures (1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fully resolved run configuration. Defaults are the reference operating
// point, so an empty config file or command line evaluates the standard
// network. Precedence: command-line override > config file > default.
struct RunConfig {
  SystemParams params;
  ProtocolPoint point;
  SweepVariable sweep_variable = SweepVariable::Beta;
  std::vector<double> sweep_grid;
  Engine engine = Engine::Analytic;
  std::uint64_t trials = 1000000;
  // No wall-clock fallback: simulation runs must state their seed.
  std::optional<std::uint64_t> seed;
  double tolerance_floor = 0.005;  // validate: minimum |analytic - simulated| allowance
  double tolerance_sigma = 4.0;    // validate: multiples of the binomial std error
  std::string output_path;
};

// Applies `[section] key = value` lines from config text onto `config`.
// Sections: [system], [point], [sweep], [montecarlo], [output]. A [result]
// section is skipped so a ResultRecord file is itself a loadable config.
// `source` names the origin in error messages.
void parse_config_text(RunConfig& config, const std::string& text,
                       const std::string& source);
void parse_config_file(RunConfig& config, const std::string& path);

// Applies one "section.key=value" override.
void apply_override(RunConfig& config, const std::string& assignment);

enum class Command { Eval, Sweep, Validate };

// The commands print a human-readable summary on stdout and, when
// output.path is set (sweep requires it), write CSV data plus a ResultRecord
// echo of the resolved configuration to <csv>.record. They throw on config
// and evaluation problems; cmd_validate returns 1 when any grid cell
// disagrees beyond tolerance.
int cmd_eval(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_validate(const RunConfig& config);

// Runs a command thunk under the exit-code policy: 0 from the thunk on
// success, 1 for validation failure, 2 for ConfigError or rejected
// parameters, 3 for numerical failures.
int run_guarded(const std::function<int()>& command);

// Dispatches the command with run_guarded.
int run_command(Command command, const RunConfig& config);

}  // namespace ehcss

#endif
