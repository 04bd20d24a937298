#include "ehcss/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "ehcss/montecarlo.hpp"

namespace ehcss {

namespace {

// Relay positions may roam only where both primary hops stay a sane length;
// d -> 0 or d -> 2 sends one mean link gain to infinity.
constexpr double kDistanceLo = 0.1;
constexpr double kDistanceHi = 1.9;

// Open-interval guard for searches over alpha and beta.
constexpr double kShareEdge = 1e-4;

void check_grid_value(SweepVariable variable, double x) {
  switch (variable) {
    case SweepVariable::Alpha:
    case SweepVariable::Beta:
      if (!(x > 0.0) || !(x < 1.0))
        throw std::domain_error(std::string("SweepSpec: ") + to_string(variable) +
                                " grid values must lie in (0, 1)");
      break;
    case SweepVariable::Eta:
      if (!(x > 0.0) || !(x <= 1.0))
        throw std::domain_error("SweepSpec: eta grid values must lie in (0, 1]");
      break;
    case SweepVariable::DistanceD:
      if (!(x >= kDistanceLo) || !(x <= kDistanceHi))
        throw std::domain_error("SweepSpec: distance_d grid values must lie in [0.1, 1.9]");
      break;
    case SweepVariable::SnrDb:
      if (!std::isfinite(x))
        throw std::domain_error("SweepSpec: snr_db grid values must be finite");
      break;
  }
}

void check_grid(const std::vector<double>& grid, SweepVariable variable) {
  if (grid.empty()) throw std::domain_error("SweepSpec: grid must be nonempty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check_grid_value(variable, grid[i]);
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::domain_error("SweepSpec: grid must be strictly increasing");
  }
}

void apply_variable(SweepVariable variable, double x, ProtocolPoint& point,
                    SystemParams& params) {
  switch (variable) {
    case SweepVariable::Alpha: point.alpha = x; break;
    case SweepVariable::Beta: point.beta = x; break;
    case SweepVariable::Eta: params.eta = x; break;
    case SweepVariable::DistanceD:
      params.d1 = x;
      params.d2 = 2.0 - x;
      break;
    case SweepVariable::SnrDb: params.snr_db = x; break;
  }
}

// Runs job(i) for i in [0, n) on as many workers as the hardware offers,
// surfacing the failure with the lowest index if any job throws. Used for
// the cheap analytic evaluations; simulation jobs parallelize internally
// and are run one at a time instead.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  std::mutex fail_mutex;
  std::size_t fail_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr fail_error;

  auto guarded = [&](std::size_t i) {
    try {
      job(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(fail_mutex);
      if (i < fail_index) {
        fail_index = i;
        fail_error = std::current_exception();
      }
    }
  };

  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) guarded(i);
      });
    }
    for (std::thread& th : pool) th.join();
  }
  if (fail_error) std::rethrow_exception(fail_error);
}

}  // namespace

const char* to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::Alpha: return "alpha";
    case SweepVariable::Beta: return "beta";
    case SweepVariable::Eta: return "eta";
    case SweepVariable::DistanceD: return "distance_d";
    case SweepVariable::SnrDb: return "snr_db";
  }
  return "?";
}

const char* to_string(Engine engine) {
  switch (engine) {
    case Engine::Analytic: return "analytic";
    case Engine::MonteCarlo: return "montecarlo";
    case Engine::Both: return "both";
  }
  return "?";
}

void SweepSpec::validate() const {
  check_grid(grid, variable);
  fixed_point.validate();
  fixed_params.validate();
  if (engine != Engine::Analytic && trials < 1)
    throw std::domain_error("SweepSpec: simulation engines need trials >= 1");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const bool wants_analytic = spec.engine != Engine::MonteCarlo;
  const bool wants_simulation = spec.engine != Engine::Analytic;
  const std::size_t rows_per_point = (wants_analytic ? 1 : 0) + (wants_simulation ? 1 : 0);
  std::vector<SweepRow> rows(spec.grid.size() * rows_per_point);

  auto cell = [&](std::size_t i) {
    ProtocolPoint point = spec.fixed_point;
    SystemParams params = spec.fixed_params;
    apply_variable(spec.variable, spec.grid[i], point, params);
    return std::pair<ProtocolPoint, SystemParams>{point, params};
  };
  auto annotate = [&](std::size_t i) {
    return std::string("run_sweep: evaluation failed at ") + to_string(spec.variable) +
           "=" + std::to_string(spec.grid[i]);
  };

  if (wants_analytic) {
    parallel_for(spec.grid.size(), [&](std::size_t i) {
      const auto [point, params] = cell(i);
      SweepRow& row = rows[i * rows_per_point];
      row.x = spec.grid[i];
      row.engine = Engine::Analytic;
      try {
        const OutagePair pair = evaluate(point, params);
        row.p_primary = pair.p_primary;
        row.p_secondary = pair.p_secondary;
      } catch (const std::exception& e) {
        throw std::runtime_error(annotate(i) + ": " + e.what());
      }
    });
  }
  if (wants_simulation) {
    // One grid point at a time; estimate_outage spreads its chunks over the
    // hardware itself.
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
      const auto [point, params] = cell(i);
      SweepRow& row = rows[i * rows_per_point + (wants_analytic ? 1 : 0)];
      row.x = spec.grid[i];
      row.engine = Engine::MonteCarlo;
      try {
        const auto [primary, secondary] =
            estimate_outage(point, params, spec.trials, spec.seed);
        row.p_primary = primary.p_hat;
        row.p_secondary = secondary.p_hat;
        row.p_primary_err = primary.std_err;
        row.p_secondary_err = secondary.std_err;
      } catch (const std::exception& e) {
        throw std::runtime_error(annotate(i) + ": " + e.what());
      }
    }
  }
  return rows;
}

double find_alpha_crossing(double beta, const ProtocolPoint& point_template,
                           const SystemParams& params, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw std::domain_error("find_alpha_crossing: tol must be > 0");

  auto difference = [&](double alpha) {
    ProtocolPoint point = point_template;
    point.alpha = alpha;
    point.beta = beta;
    const OutagePair pair = evaluate(point, params);
    return pair.p_primary - pair.p_secondary;
  };

  double lo = kShareEdge, hi = 1.0 - kShareEdge;
  double f_lo = difference(lo);
  const double f_hi = difference(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw std::runtime_error(
        "find_alpha_crossing: outage difference has no sign change on (0, 1)");

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = difference(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BetaOptimum optimize_beta(const ProtocolPoint& point_template,
                          const SystemParams& params, BetaObjective objective) {
  auto value_at = [&](double beta) {
    ProtocolPoint point = point_template;
    point.beta = beta;
    const OutagePair pair = evaluate(point, params);
    switch (objective) {
      case BetaObjective::Primary: return pair.p_primary;
      case BetaObjective::Secondary: return pair.p_secondary;
      case BetaObjective::MaxOfBoth: break;
    }
    return std::max(pair.p_primary, pair.p_secondary);
  };

  // Coarse pass: uniform grid across the search interval picks the bracket.
  constexpr int kSeedPoints = 33;
  const double lo = kShareEdge, hi = 1.0 - kShareEdge;
  double best_value = std::numeric_limits<double>::infinity();
  int best = 0;
  double seed_beta[kSeedPoints];
  for (int i = 0; i < kSeedPoints; ++i) {
    seed_beta[i] = lo + (hi - lo) * i / (kSeedPoints - 1);
    const double value = value_at(seed_beta[i]);
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  double a = seed_beta[std::max(best - 1, 0)];
  double b = seed_beta[std::min(best + 1, kSeedPoints - 1)];

  // Golden-section refinement of the bracket.
  constexpr double kTol = 1e-6;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double invphi2 = 1.0 - invphi;
  double h = b - a;
  double c = a + invphi2 * h, d = a + invphi * h;
  double value_c = value_at(c), value_d = value_at(d);
  while (h > kTol) {
    if (value_c < value_d) {
      b = d;
      d = c;
      value_d = value_c;
      h = b - a;
      c = a + invphi2 * h;
      value_c = value_at(c);
    } else {
      a = c;
      c = d;
      value_c = value_d;
      h = b - a;
      d = a + invphi * h;
      value_d = value_at(d);
    }
  }

  BetaOptimum optimum;
  optimum.beta_star = 0.5 * (a + b);
  optimum.value = value_at(optimum.beta_star);
  constexpr double kBoundaryBand = 1e-3;
  optimum.on_boundary =
      optimum.beta_star - lo <= kBoundaryBand || hi - optimum.beta_star <= kBoundaryBand;
  return optimum;
}

std::vector<ComparisonRow> compare_protocols(double alpha, double beta,
                                             const SystemParams& params,
                                             const std::vector<double>& snr_grid) {
  check_grid(snr_grid, SweepVariable::SnrDb);
  std::vector<ComparisonRow> rows(snr_grid.size());
  parallel_for(snr_grid.size(), [&](std::size_t i) {
    SystemParams cell = params;
    cell.snr_db = snr_grid[i];
    ProtocolPoint point;
    point.relaying = Relaying::AF;
    point.alpha = alpha;
    point.beta = beta;
    rows[i].snr_db = snr_grid[i];
    point.protocol = Protocol::TS;
    rows[i].ts = evaluate(point, cell);
    point.protocol = Protocol::PS;
    rows[i].ps = evaluate(point, cell);
  });
  return rows;
}

}  // namespace ehcss
