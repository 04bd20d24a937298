#ifndef EHCSS_SWEEP_HPP
#define EHCSS_SWEEP_HPP

#include <cstdint>
#include <vector>

#include "ehcss/analytic.hpp"
#include "ehcss/channel.hpp"

namespace ehcss {

// Which scalar the sweep varies. DistanceD moves the relay along the
// primary axis: d1 = d, d2 = 2 - d, keeping the endpoints two units apart.
enum class SweepVariable { Alpha, Beta, Eta, DistanceD, SnrDb };

enum class Engine { Analytic, MonteCarlo, Both };

const char* to_string(SweepVariable variable);
const char* to_string(Engine engine);

struct SweepSpec {
  SweepVariable variable = SweepVariable::Alpha;
  std::vector<double> grid;  // strictly increasing, inside the variable's domain
  ProtocolPoint fixed_point;
  SystemParams fixed_params;
  Engine engine = Engine::Analytic;
  std::uint64_t trials = 100000;  // per grid point, simulation engines only
  std::uint64_t seed = 1;         // shared by every grid point (common random numbers)

  void validate() const;
};

// One evaluated grid point. The error fields are the binomial standard
// errors of the estimates and are exactly zero for the analytic engine.
// `engine` records which engine produced the row and is never Both.
struct SweepRow {
  double x = 0.0;
  double p_primary = 0.0;
  double p_secondary = 0.0;
  double p_primary_err = 0.0;
  double p_secondary_err = 0.0;
  Engine engine = Engine::Analytic;
};

// Evaluates one row per grid value, in grid order.
// Engine Both emits two adjacent rows per value, analytic first. Each row
// equals an independent single-point call of the matching engine at that
// grid value; rows share no state.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Locates the time-share at which primary and secondary outages are equal
// by bisecting p_primary(alpha) - p_secondary(alpha) with the analytic
// engine. `beta` overrides the template's harvest share. Throws when the
// difference does not change sign on the search interval.
double find_alpha_crossing(double beta, const ProtocolPoint& point_template,
                           const SystemParams& params, double tol);

// Scalarization minimized by optimize_beta. MaxOfBoth minimizes the worse
// of the two users' outages.
enum class BetaObjective { Primary, Secondary, MaxOfBoth };

struct BetaOptimum {
  double beta_star = 0.0;
  double value = 0.0;
  // The argmin landed on the edge of the search interval; the reported
  // point is then a constrained minimum, not a stationary one.
  bool on_boundary = false;
};

// Minimizes the chosen outage objective over the harvest share: a 33-point
// uniform grid picks the bracket, golden-section refines it.
BetaOptimum optimize_beta(const ProtocolPoint& point_template,
                          const SystemParams& params,
                          BetaObjective objective = BetaObjective::MaxOfBoth);

// TS versus PS under amplifying relays at each SNR of the grid.
struct ComparisonRow {
  double snr_db = 0.0;
  OutagePair ts;
  OutagePair ps;
};

std::vector<ComparisonRow> compare_protocols(double alpha, double beta,
                                             const SystemParams& params,
                                             const std::vector<double>& snr_grid);

}  // namespace ehcss

#endif
