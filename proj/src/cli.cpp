#include "ehcss/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ehcss/montecarlo.hpp"

namespace ehcss {

namespace {

std::string trim(const std::string& s) {
  const std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& context) {
  char* end = nullptr;
  const double parsed = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(parsed))
    throw ConfigError(context + ": expected a finite number, got \"" + value + "\"");
  return parsed;
}

std::uint64_t parse_u64(const std::string& value, const std::string& context) {
  if (value.empty() || value[0] == '-' || value[0] == '+')
    throw ConfigError(context + ": expected an unsigned integer, got \"" + value + "\"");
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size())
    throw ConfigError(context + ": expected an unsigned integer, got \"" + value + "\"");
  return parsed;
}

std::vector<double> parse_grid(const std::string& value, const std::string& context) {
  std::string spaced = value;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::vector<double> grid;
  std::string token;
  while (in >> token) grid.push_back(parse_double(token, context));
  if (grid.empty()) throw ConfigError(context + ": grid must list at least one value");
  return grid;
}

Protocol parse_protocol(const std::string& value, const std::string& context) {
  if (value == "ts") return Protocol::TS;
  if (value == "ps") return Protocol::PS;
  throw ConfigError(context + ": protocol must be ts or ps, got \"" + value + "\"");
}

Relaying parse_relaying(const std::string& value, const std::string& context) {
  if (value == "df") return Relaying::DF;
  if (value == "af") return Relaying::AF;
  throw ConfigError(context + ": relaying must be df or af, got \"" + value + "\"");
}

SweepVariable parse_variable(const std::string& value, const std::string& context) {
  if (value == "alpha") return SweepVariable::Alpha;
  if (value == "beta") return SweepVariable::Beta;
  if (value == "eta") return SweepVariable::Eta;
  if (value == "distance_d") return SweepVariable::DistanceD;
  if (value == "snr_db") return SweepVariable::SnrDb;
  throw ConfigError(context +
                    ": variable must be alpha, beta, eta, distance_d or snr_db, got \"" +
                    value + "\"");
}

Engine parse_engine(const std::string& value, const std::string& context) {
  if (value == "analytic") return Engine::Analytic;
  if (value == "montecarlo") return Engine::MonteCarlo;
  if (value == "both") return Engine::Both;
  throw ConfigError(context + ": engine must be analytic, montecarlo or both, got \"" +
                    value + "\"");
}

const char* protocol_name(Protocol p) { return p == Protocol::TS ? "ts" : "ps"; }
const char* relaying_name(Relaying r) { return r == Relaying::DF ? "df" : "af"; }

void apply_key(RunConfig& config, const std::string& section, const std::string& key,
               const std::string& value, const std::string& context) {
  const std::string where = context + ": [" + section + "] " + key;
  if (section == "system") {
    SystemParams& p = config.params;
    if (key == "snr_db") p.snr_db = parse_double(value, where);
    else if (key == "m") p.m = parse_double(value, where);
    else if (key == "eta") p.eta = parse_double(value, where);
    else if (key == "v") p.v = parse_double(value, where);
    else if (key == "d1") p.d1 = parse_double(value, where);
    else if (key == "d2") p.d2 = parse_double(value, where);
    else if (key == "d3") p.d3 = parse_double(value, where);
    else if (key == "d4") p.d4 = parse_double(value, where);
    else if (key == "rp") p.rp = parse_double(value, where);
    else if (key == "rs") p.rs = parse_double(value, where);
    else if (key == "block_time") p.block_time = parse_double(value, where);
    else if (key == "noise_pt_st") p.noise_variances[0] = parse_double(value, where);
    else if (key == "noise_st_pr") p.noise_variances[1] = parse_double(value, where);
    else if (key == "noise_st_sr") p.noise_variances[2] = parse_double(value, where);
    else if (key == "noise_pt_sr") p.noise_variances[3] = parse_double(value, where);
    else throw ConfigError(where + ": unknown key");
  } else if (section == "point") {
    if (key == "protocol") config.point.protocol = parse_protocol(value, where);
    else if (key == "relaying") config.point.relaying = parse_relaying(value, where);
    else if (key == "alpha") config.point.alpha = parse_double(value, where);
    else if (key == "beta") config.point.beta = parse_double(value, where);
    else throw ConfigError(where + ": unknown key");
  } else if (section == "sweep") {
    if (key == "variable") config.sweep_variable = parse_variable(value, where);
    else if (key == "grid") config.sweep_grid = parse_grid(value, where);
    else if (key == "engine") config.engine = parse_engine(value, where);
    else throw ConfigError(where + ": unknown key");
  } else if (section == "montecarlo") {
    if (key == "trials") config.trials = parse_u64(value, where);
    else if (key == "seed") config.seed = parse_u64(value, where);
    else if (key == "tolerance_floor") config.tolerance_floor = parse_double(value, where);
    else if (key == "tolerance_sigma") config.tolerance_sigma = parse_double(value, where);
    else throw ConfigError(where + ": unknown key");
  } else if (section == "output") {
    if (key == "path") config.output_path = value;
    else throw ConfigError(where + ": unknown key");
  } else {
    throw ConfigError(context + ": unknown section [" + section + "]");
  }
}

bool known_section(const std::string& section) {
  return section == "system" || section == "point" || section == "sweep" ||
         section == "montecarlo" || section == "output";
}

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::FILE* open_out(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open \"" + path + "\" for writing");
  return f;
}

void write_config_echo(std::FILE* f, const RunConfig& c) {
  const SystemParams& p = c.params;
  std::fprintf(f, "[system]\n");
  std::fprintf(f, "snr_db = %s\n", g17(p.snr_db).c_str());
  std::fprintf(f, "m = %s\n", g17(p.m).c_str());
  std::fprintf(f, "eta = %s\n", g17(p.eta).c_str());
  std::fprintf(f, "v = %s\n", g17(p.v).c_str());
  std::fprintf(f, "d1 = %s\n", g17(p.d1).c_str());
  std::fprintf(f, "d2 = %s\n", g17(p.d2).c_str());
  std::fprintf(f, "d3 = %s\n", g17(p.d3).c_str());
  std::fprintf(f, "d4 = %s\n", g17(p.d4).c_str());
  std::fprintf(f, "rp = %s\n", g17(p.rp).c_str());
  std::fprintf(f, "rs = %s\n", g17(p.rs).c_str());
  std::fprintf(f, "block_time = %s\n", g17(p.block_time).c_str());
  std::fprintf(f, "noise_pt_st = %s\n", g17(p.noise_variances[0]).c_str());
  std::fprintf(f, "noise_st_pr = %s\n", g17(p.noise_variances[1]).c_str());
  std::fprintf(f, "noise_st_sr = %s\n", g17(p.noise_variances[2]).c_str());
  std::fprintf(f, "noise_pt_sr = %s\n", g17(p.noise_variances[3]).c_str());
  std::fprintf(f, "\n[point]\n");
  std::fprintf(f, "protocol = %s\n", protocol_name(c.point.protocol));
  std::fprintf(f, "relaying = %s\n", relaying_name(c.point.relaying));
  std::fprintf(f, "alpha = %s\n", g17(c.point.alpha).c_str());
  std::fprintf(f, "beta = %s\n", g17(c.point.beta).c_str());
  std::fprintf(f, "\n[sweep]\n");
  std::fprintf(f, "variable = %s\n", to_string(c.sweep_variable));
  if (!c.sweep_grid.empty()) {
    std::fprintf(f, "grid =");
    for (std::size_t i = 0; i < c.sweep_grid.size(); ++i)
      std::fprintf(f, "%s %s", i ? "," : "", g17(c.sweep_grid[i]).c_str());
    std::fprintf(f, "\n");
  }
  std::fprintf(f, "engine = %s\n", to_string(c.engine));
  std::fprintf(f, "\n[montecarlo]\n");
  std::fprintf(f, "trials = %llu\n", static_cast<unsigned long long>(c.trials));
  if (c.seed)
    std::fprintf(f, "seed = %llu\n", static_cast<unsigned long long>(*c.seed));
  std::fprintf(f, "tolerance_floor = %s\n", g17(c.tolerance_floor).c_str());
  std::fprintf(f, "tolerance_sigma = %s\n", g17(c.tolerance_sigma).c_str());
  if (!c.output_path.empty()) {
    std::fprintf(f, "\n[output]\n");
    std::fprintf(f, "path = %s\n", c.output_path.c_str());
  }
}

using ResultKeys = std::vector<std::pair<std::string, std::string>>;

// The record is a reloadable config echo plus a [result] section; the
// parser skips [result], so feeding the record back in reproduces the run.
void write_record(const std::string& csv_path, const RunConfig& config,
                  const char* command, double timing_ms, const ResultKeys& extra) {
  std::FILE* f = open_out(csv_path + ".record");
  write_config_echo(f, config);
  std::fprintf(f, "\n[result]\n");
  std::fprintf(f, "command = %s\n", command);
  std::fprintf(f, "version = %s\n", kVersion);
  std::fprintf(f, "timing_ms = %.3f\n", timing_ms);
  for (const auto& [key, value] : extra)
    std::fprintf(f, "%s = %s\n", key.c_str(), value.c_str());
  std::fclose(f);
}

// Splices the engine name in front of the extension when a dual-engine run
// needs one file per engine.
std::string engine_path(const std::string& base, Engine engine, bool split) {
  if (!split) return base;
  const std::size_t dot = base.find_last_of('.');
  const std::size_t slash = base.find_last_of('/');
  const std::string tag = std::string(".") + to_string(engine);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + tag;
  return base.substr(0, dot) + tag + base.substr(dot);
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Negative-control hook for the validation pipeline: a nonzero bias shifts
// the analytic side so a healthy run must report disagreement. Unset in
// normal operation.
double validate_bias() {
  const char* env = std::getenv("EHCSS_VALIDATE_BIAS");
  if (!env) return 0.0;
  return parse_double(env, "EHCSS_VALIDATE_BIAS");
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void require_seed(const RunConfig& config) {
  if (!config.seed)
    throw ConfigError(
        "montecarlo.seed is required whenever the simulation engine runs");
}

}  // namespace

void parse_config_text(RunConfig& config, const std::string& text,
                       const std::string& source) {
  std::istringstream in(text);
  std::string line, section;
  bool skipping_result = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string context = source + ":" + std::to_string(line_no);
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.resize(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(context + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      skipping_result = section == "result";
      if (!skipping_result && !known_section(section))
        throw ConfigError(context + ": unknown section [" + section + "]");
      continue;
    }
    if (skipping_result) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(context + ": expected key = value");
    if (section.empty())
      throw ConfigError(context + ": key outside any [section]");
    apply_key(config, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
              context);
  }
}

void parse_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file \"" + path + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  parse_config_text(config, text.str(), path);
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  const std::size_t dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override \"" + assignment +
                      "\" must look like section.key=value");
  apply_key(config, trim(assignment.substr(0, dot)),
            trim(assignment.substr(dot + 1, eq - dot - 1)),
            trim(assignment.substr(eq + 1)), "override");
}

int cmd_eval(const RunConfig& config) {
  config.params.validate();
  config.point.validate();
  const bool wants_analytic = config.engine != Engine::MonteCarlo;
  const bool wants_simulation = config.engine != Engine::Analytic;
  if (wants_simulation) require_seed(config);

  struct Row {
    Engine engine;
    double p1, p2, e1, e2;
  };
  Stopwatch clock;
  std::vector<Row> rows;
  if (wants_analytic) {
    const OutagePair pair = evaluate(config.point, config.params);
    rows.push_back({Engine::Analytic, pair.p_primary, pair.p_secondary, 0.0, 0.0});
  }
  if (wants_simulation) {
    const auto [primary, secondary] =
        estimate_outage(config.point, config.params, config.trials, *config.seed);
    rows.push_back({Engine::MonteCarlo, primary.p_hat, secondary.p_hat,
                    primary.std_err, secondary.std_err});
  }
  const double timing_ms = clock.elapsed_ms();

  for (const Row& row : rows) {
    std::printf("%-10s p_primary=%-12.6g p_secondary=%-12.6g", to_string(row.engine),
                row.p1, row.p2);
    if (row.engine == Engine::MonteCarlo)
      std::printf(" (std_err %.2g / %.2g)", row.e1, row.e2);
    std::printf("\n");
  }

  if (!config.output_path.empty()) {
    std::FILE* f = open_out(config.output_path);
    std::fprintf(f, "engine,p_primary,p_secondary,p_primary_err,p_secondary_err\n");
    for (const Row& row : rows)
      std::fprintf(f, "%s,%s,%s,%s,%s\n", to_string(row.engine), g17(row.p1).c_str(),
                   g17(row.p2).c_str(), g17(row.e1).c_str(), g17(row.e2).c_str());
    std::fclose(f);
    ResultKeys keys;
    for (const Row& row : rows) {
      const std::string prefix = to_string(row.engine);
      keys.emplace_back(prefix + "_p_primary", g17(row.p1));
      keys.emplace_back(prefix + "_p_secondary", g17(row.p2));
      if (row.engine == Engine::MonteCarlo) {
        keys.emplace_back(prefix + "_p_primary_err", g17(row.e1));
        keys.emplace_back(prefix + "_p_secondary_err", g17(row.e2));
      }
    }
    write_record(config.output_path, config, "eval", timing_ms, keys);
  }
  return 0;
}

int cmd_sweep(const RunConfig& config) {
  if (config.output_path.empty())
    throw ConfigError("output.path is required for sweep");
  SweepSpec spec;
  spec.variable = config.sweep_variable;
  spec.grid = config.sweep_grid;
  spec.fixed_point = config.point;
  spec.fixed_params = config.params;
  spec.engine = config.engine;
  spec.trials = config.trials;
  if (config.engine != Engine::Analytic) {
    require_seed(config);
    spec.seed = *config.seed;
  }

  Stopwatch clock;
  const std::vector<SweepRow> rows = run_sweep(spec);
  const double timing_ms = clock.elapsed_ms();

  const bool split = config.engine == Engine::Both;
  for (Engine engine : {Engine::Analytic, Engine::MonteCarlo}) {
    std::vector<const SweepRow*> subset;
    for (const SweepRow& row : rows)
      if (row.engine == engine) subset.push_back(&row);
    if (subset.empty()) continue;
    const std::string path = engine_path(config.output_path, engine, split);
    std::FILE* f = open_out(path);
    std::fprintf(f, "x,p_primary,p_secondary,p_primary_err,p_secondary_err,engine\n");
    for (const SweepRow* row : subset)
      std::fprintf(f, "%s,%s,%s,%s,%s,%s\n", g17(row->x).c_str(),
                   g17(row->p_primary).c_str(), g17(row->p_secondary).c_str(),
                   g17(row->p_primary_err).c_str(), g17(row->p_secondary_err).c_str(),
                   to_string(row->engine));
    std::fclose(f);
    write_record(path, config, "sweep", timing_ms,
                 {{"engine", to_string(engine)},
                  {"rows", std::to_string(subset.size())}});
    std::printf("sweep: wrote %zu rows to %s\n", subset.size(), path.c_str());
  }
  return 0;
}

int cmd_validate(const RunConfig& config) {
  config.params.validate();
  require_seed(config);
  if (!(config.tolerance_floor >= 0.0) || !(config.tolerance_sigma >= 0.0))
    throw ConfigError("tolerance_floor and tolerance_sigma must be nonnegative");
  const double bias = validate_bias();

  struct Combo {
    Protocol protocol;
    Relaying relaying;
    const char* name;
  };
  static constexpr Combo kCombos[] = {{Protocol::TS, Relaying::DF, "TS-DF"},
                                      {Protocol::TS, Relaying::AF, "TS-AF"},
                                      {Protocol::PS, Relaying::DF, "PS-DF"},
                                      {Protocol::PS, Relaying::AF, "PS-AF"}};
  static constexpr double kAlphas[] = {0.3, 0.5, 0.7};
  static constexpr double kBetas[] = {0.2, 0.4, 0.6};

  struct Cell {
    const Combo* combo;
    double alpha, beta;
    double p1_analytic, p1_simulated, tol1;
    double p2_analytic, p2_simulated, tol2;
    bool pass;
  };
  Stopwatch clock;
  std::vector<Cell> cells;
  int failures = 0;
  for (const Combo& combo : kCombos)
    for (double alpha : kAlphas)
      for (double beta : kBetas) {
        ProtocolPoint point;
        point.protocol = combo.protocol;
        point.relaying = combo.relaying;
        point.alpha = alpha;
        point.beta = beta;
        const OutagePair exact = evaluate(point, config.params);
        const auto [primary, secondary] =
            estimate_outage(point, config.params, config.trials, *config.seed);
        Cell cell;
        cell.combo = &combo;
        cell.alpha = alpha;
        cell.beta = beta;
        cell.p1_analytic = clamp01(exact.p_primary + bias);
        cell.p2_analytic = clamp01(exact.p_secondary + bias);
        cell.p1_simulated = primary.p_hat;
        cell.p2_simulated = secondary.p_hat;
        cell.tol1 = std::max(config.tolerance_floor,
                             config.tolerance_sigma * primary.std_err);
        cell.tol2 = std::max(config.tolerance_floor,
                             config.tolerance_sigma * secondary.std_err);
        cell.pass = std::fabs(cell.p1_analytic - cell.p1_simulated) <= cell.tol1 &&
                    std::fabs(cell.p2_analytic - cell.p2_simulated) <= cell.tol2;
        failures += !cell.pass;
        std::printf(
            "%s alpha=%.1f beta=%.1f  primary |diff|=%.6f tol=%.6f  "
            "secondary |diff|=%.6f tol=%.6f  %s\n",
            combo.name, alpha, beta, std::fabs(cell.p1_analytic - cell.p1_simulated),
            cell.tol1, std::fabs(cell.p2_analytic - cell.p2_simulated), cell.tol2,
            cell.pass ? "PASS" : "FAIL");
        cells.push_back(cell);
      }
  const double timing_ms = clock.elapsed_ms();

  if (!config.output_path.empty()) {
    std::FILE* f = open_out(config.output_path);
    std::fprintf(f,
                 "protocol,relaying,alpha,beta,p_primary_analytic,"
                 "p_primary_simulated,p_primary_tolerance,p_secondary_analytic,"
                 "p_secondary_simulated,p_secondary_tolerance,status\n");
    for (const Cell& cell : cells)
      std::fprintf(f, "%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s\n",
                   protocol_name(cell.combo->protocol),
                   relaying_name(cell.combo->relaying), g17(cell.alpha).c_str(),
                   g17(cell.beta).c_str(), g17(cell.p1_analytic).c_str(),
                   g17(cell.p1_simulated).c_str(), g17(cell.tol1).c_str(),
                   g17(cell.p2_analytic).c_str(), g17(cell.p2_simulated).c_str(),
                   g17(cell.tol2).c_str(), cell.pass ? "pass" : "fail");
    std::fclose(f);
    write_record(config.output_path, config, "validate", timing_ms,
                 {{"cells", std::to_string(cells.size())},
                  {"failures", std::to_string(failures)}});
  }
  std::printf("validate: %zu/%zu cells within tolerance\n", cells.size() - failures,
              cells.size());
  return failures == 0 ? 0 : 1;
}

int run_guarded(const std::function<int()>& command) {
  try {
    return command();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}

int run_command(Command command, const RunConfig& config) {
  return run_guarded([&] {
    switch (command) {
      case Command::Eval: return cmd_eval(config);
      case Command::Sweep: return cmd_sweep(config);
      case Command::Validate: return cmd_validate(config);
    }
    throw ConfigError("unknown command");
  });
}

}  // namespace ehcss
