// End-to-end acceptance checks. Each criterion prints exactly one verdict
// line (indented lines above it are supporting detail); the exit status is
// the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bessel_reference.hpp"
#include "ehcss/cli.hpp"
#include "ehcss/montecarlo.hpp"
#include "ehcss/sweep.hpp"

using namespace ehcss;

namespace {

int g_failures = 0;

void verdict(int n, bool ok, const char* text) {
  std::printf("criterion %2d: %s — %s\n", n, ok ? "PASS" : "FAIL", text);
  if (!ok) ++g_failures;
}

const char* name_of(Protocol p) { return p == Protocol::TS ? "TS" : "PS"; }
const char* name_of(Relaying r) { return r == Relaying::DF ? "DF" : "AF"; }

struct Combo {
  Protocol protocol;
  Relaying relaying;
};
constexpr Combo kCombos[] = {{Protocol::TS, Relaying::DF},
                             {Protocol::TS, Relaying::AF},
                             {Protocol::PS, Relaying::DF},
                             {Protocol::PS, Relaying::AF}};

// Cross-engine agreement over the reference grid: every (combo, alpha, beta,
// m) cell must agree between the closed forms and a 10^6-trial simulation to
// max(0.005, 4 sigma), and the whole grid must finish inside two minutes.
void criterion_cross_engine() {
  const double alphas[] = {0.3, 0.5, 0.7};
  const double betas[] = {0.2, 0.4, 0.6};
  const double shapes[] = {0.5, 1.0, 1.5};
  constexpr std::uint64_t kTrials = 1000000;
  constexpr std::uint64_t kSeed = 4321;

  const auto start = std::chrono::steady_clock::now();
  int cells = 0, ok_cells = 0;
  for (const Combo& combo : kCombos)
    for (double m : shapes)
      for (double alpha : alphas)
        for (double beta : betas) {
          ProtocolPoint pt{combo.protocol, combo.relaying, alpha, beta};
          SystemParams params;
          params.m = m;
          const OutagePair exact = evaluate(pt, params);
          const auto [p1, p2] = estimate_outage(pt, params, kTrials, kSeed);
          const double tol1 = std::max(0.005, 4.0 * p1.std_err);
          const double tol2 = std::max(0.005, 4.0 * p2.std_err);
          const double d1 = std::fabs(exact.p_primary - p1.p_hat);
          const double d2 = std::fabs(exact.p_secondary - p2.p_hat);
          ++cells;
          if (d1 <= tol1 && d2 <= tol2) {
            ++ok_cells;
          } else {
            std::printf(
                "  %s-%s m=%.1f alpha=%.1f beta=%.1f: primary |diff|=%.4f "
                "(tol %.4f), secondary |diff|=%.4f (tol %.4f)\n",
                name_of(combo.protocol), name_of(combo.relaying), m, alpha,
                beta, d1, tol1, d2, tol2);
          }
        }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("  %d/%d cells within tolerance, %.1f s\n", ok_cells, cells,
              seconds);
  verdict(1, ok_cells == cells && seconds < 120.0,
          "cross-engine agreement on the (combo, alpha, beta, m) grid");
}

// The equal-outage time share for TS-DF at beta = 0.3 sits at 0.65 +- 0.03
// for every fading shape, with at most 0.02 spread across shapes.
void criterion_crossing() {
  ProtocolPoint pt{Protocol::TS, Relaying::DF, 0.5, 0.3};
  double lo = 2.0, hi = -1.0;
  bool in_band = true;
  for (double m : {0.5, 1.0, 1.5}) {
    SystemParams params;
    params.m = m;
    const double star = find_alpha_crossing(0.3, pt, params, 1e-6);
    std::printf("  m=%.1f alpha*=%.6f\n", m, star);
    in_band = in_band && std::fabs(star - 0.65) <= 0.03;
    lo = std::min(lo, star);
    hi = std::max(hi, star);
  }
  verdict(2, in_band && (hi - lo) <= 0.02,
          "equal-outage time share near 0.65, stable across fading shapes");
}

// The primary-optimal harvest share: TS-DF lands in [0.25, 0.35] at m=1 and
// [0.2, 0.3] at m=0.5; PS-DF lands in [0.6, 0.8].
void criterion_optimal_beta() {
  bool ok = true;
  const struct {
    Protocol protocol;
    double m, lo, hi;
  } cases[] = {{Protocol::TS, 1.0, 0.25, 0.35},
               {Protocol::TS, 0.5, 0.20, 0.30},
               {Protocol::PS, 1.0, 0.60, 0.80}};
  for (const auto& c : cases) {
    ProtocolPoint pt{c.protocol, Relaying::DF, 0.5, 0.5};
    SystemParams params;
    params.m = c.m;
    const BetaOptimum opt = optimize_beta(pt, params, BetaObjective::Primary);
    std::printf("  %s-DF m=%.1f beta*=%.6f value=%.3e%s\n",
                name_of(c.protocol), c.m, opt.beta_star, opt.value,
                opt.on_boundary ? " (boundary)" : "");
    ok = ok && !opt.on_boundary && opt.beta_star >= c.lo &&
         opt.beta_star <= c.hi;
  }
  verdict(3, ok, "primary-optimal harvest share in the expected bands");
}

// With nearly the whole block spent harvesting, the remaining transmission
// time cannot carry either rate: both outages saturate.
void criterion_ts_saturation() {
  ProtocolPoint pt{Protocol::TS, Relaying::DF, 0.5, 0.9};
  const OutagePair p = evaluate(pt, SystemParams{});
  std::printf("  beta=0.9: p_primary=%.6f p_secondary=%.6f\n", p.p_primary,
              p.p_secondary);
  verdict(4, p.p_primary >= 0.99 && p.p_secondary >= 0.99,
          "TS outage saturates when the harvest share approaches one");
}

// PS-AF secondary outage is nonincreasing in the power-split share (more
// harvested power only helps a user whose own decode slot is unaffected).
void criterion_ps_af_monotone() {
  ProtocolPoint pt{Protocol::PS, Relaying::AF, 0.7, 0.1};
  bool ok = true;
  double prev = 2.0;
  for (int i = 1; i <= 9; ++i) {
    pt.beta = 0.1 * i;
    const double p = evaluate(pt, SystemParams{}).p_secondary;
    const double rounded = std::round(p * 1e9) / 1e9;
    ok = ok && rounded <= prev;
    prev = rounded;
  }
  verdict(5, ok, "PS-AF secondary outage nonincreasing in the power split");
}

// Under amplifying relays the power-split protocol dominates the time-split
// protocol for both users at every SNR on the 10..40 dB grid.
void criterion_protocol_comparison() {
  const std::vector<double> grid{10, 15, 20, 25, 30, 35, 40};
  const auto rows = compare_protocols(0.7, 0.4, SystemParams{}, grid);
  bool ok = rows.size() == grid.size();
  for (const ComparisonRow& row : rows)
    ok = ok && row.ps.p_primary <= row.ts.p_primary &&
         row.ps.p_secondary <= row.ts.p_secondary;
  verdict(6, ok, "PS outage at or below TS outage for both users, 10-40 dB");
}

// Relay placement: the primary outage over the relay position has an
// interior maximum with the near-relay end below the midpoint, and the
// relaying modes order as simulated at the two extremes.
void criterion_relay_placement() {
  SweepSpec spec;
  spec.variable = SweepVariable::DistanceD;
  spec.grid = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8};
  spec.fixed_point = {Protocol::TS, Relaying::DF, 0.7, 0.3};

  bool shape_ok = true;
  for (Relaying relay : {Relaying::DF, Relaying::AF}) {
    spec.fixed_point.relaying = relay;
    const auto rows = run_sweep(spec);
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].p_primary > rows[argmax].p_primary) argmax = i;
    const bool interior = argmax != 0 && argmax + 1 != rows.size();
    const bool edge_below_mid = rows.front().p_primary < rows[4].p_primary;
    std::printf("  TS-%s: argmax d=%.1f, p(0.2)=%.3e, p(1.0)=%.3e\n",
                name_of(relay), rows[argmax].x, rows.front().p_primary,
                rows[4].p_primary);
    shape_ok = shape_ok && interior && edge_below_mid;
  }

  // Mode ordering at the extremes, by simulation with a 4-sigma margin.
  constexpr std::uint64_t kTrials = 2000000;
  constexpr std::uint64_t kSeed = 98765;
  ProtocolPoint df_pt{Protocol::TS, Relaying::DF, 0.7, 0.3};
  ProtocolPoint af_pt{Protocol::TS, Relaying::AF, 0.7, 0.3};
  bool order_ok = true;
  const struct {
    double d;
    bool af_below;  // true: require AF <= DF, else DF <= AF
  } ends[] = {{0.2, true}, {1.8, false}};
  for (const auto& e : ends) {
    SystemParams params;
    params.d1 = e.d;
    params.d2 = 2.0 - e.d;
    const auto df = estimate_outage(df_pt, params, kTrials, kSeed).first;
    const auto af = estimate_outage(af_pt, params, kTrials, kSeed + 1).first;
    const double margin = e.af_below ? df.p_hat - af.p_hat : af.p_hat - df.p_hat;
    const double need = 4.0 * std::hypot(df.std_err, af.std_err);
    std::printf("  d=%.1f: p_DF=%.4e p_AF=%.4e, %s margin %.2e (needs > %.2e)\n",
                e.d, df.p_hat, af.p_hat, e.af_below ? "AF<=DF" : "DF<=AF",
                margin, need);
    order_ok = order_ok && margin > need;
  }
  verdict(7, shape_ok && order_ok,
          "relay-placement curve shape and simulated mode ordering");
}

// The product-CDF evaluator against its two oracles: the exponential-case
// closed form (frozen 25-digit table) and a 10^7-draw brute force at the
// half-integer and three-halves shapes.
void criterion_product_cdf_oracle() {
  double worst = 0.0;
  for (const BesselReferencePoint& ref : kBesselReference)
    worst = std::max(worst,
                     std::fabs(gamma_product_cdf(1.0, 1.0, 1.0, ref.z) - ref.cdf));
  std::printf("  m=1 closed form: worst |err| %.2e over 50 points\n", worst);
  bool ok = worst <= 1e-8;

  constexpr std::uint64_t kDraws = 10000000;
  const double theta_a = 1.0, theta_b = 0.5;
  const double zs[] = {0.01, 0.05, 0.25, 1.0, 4.0};
  for (double m : {0.5, 1.5}) {
    Rng rng(321 + static_cast<std::uint64_t>(10 * m));
    std::array<std::uint64_t, 5> hits{};
    for (std::uint64_t i = 0; i < kDraws; ++i) {
      const double prod =
          rng.gamma_variate(m, theta_a) * rng.gamma_variate(m, theta_b);
      for (std::size_t k = 0; k < hits.size(); ++k)
        if (prod <= zs[k]) ++hits[k];
    }
    for (std::size_t k = 0; k < hits.size(); ++k) {
      const double emp = static_cast<double>(hits[k]) / kDraws;
      const double se = std::sqrt(emp * (1.0 - emp) / kDraws);
      const double diff =
          std::fabs(gamma_product_cdf(m, theta_a, theta_b, zs[k]) - emp);
      if (diff > 3.0 * se) {
        std::printf("  m=%.1f z=%.2f: |diff|=%.2e > 3 sigma=%.2e\n", m, zs[k],
                    diff, 3.0 * se);
        ok = false;
      }
    }
    std::printf("  m=%.1f brute force: 5 z-points within 3 sigma\n", m);
  }
  verdict(8, ok, "product-CDF closed-form and brute-force oracles");
}

// Outage strictly decreases in the harvesting efficiency for every combo
// and both users.
void criterion_eta_decrease() {
  bool ok = true;
  for (const Combo& combo : kCombos) {
    ProtocolPoint pt{combo.protocol, combo.relaying, 0.5, 0.5};
    double prev1 = 2.0, prev2 = 2.0;
    for (int i = 1; i <= 5; ++i) {
      SystemParams params;
      params.eta = 0.2 * i;
      const OutagePair p = evaluate(pt, params);
      ok = ok && p.p_primary < prev1 && p.p_secondary < prev2;
      prev1 = p.p_primary;
      prev2 = p.p_secondary;
    }
  }
  verdict(9, ok, "outage strictly decreasing in harvesting efficiency");
}

// Property bundle: simulation determinism, quadrature refinement stability,
// decode-forward secondary dominance, and the config round trip.
void criterion_properties() {
  bool determinism = true;
  for (const Combo& combo : kCombos) {
    ProtocolPoint pt{combo.protocol, combo.relaying, 0.6, 0.3};
    const auto a = estimate_outage(pt, SystemParams{}, 200000, 777);
    const auto b = estimate_outage(pt, SystemParams{}, 200000, 777);
    determinism = determinism && a.first.p_hat == b.first.p_hat &&
                  a.second.p_hat == b.second.p_hat &&
                  a.first.std_err == b.first.std_err;
  }

  QuadratureSpec fine;
  fine.abs_tol = 1e-12;
  fine.rel_tol = 1e-10;
  fine.max_subdivisions = 8192;
  fine.tail_cutoff_mass = 1e-14;
  bool refinement = true;
  for (const Combo& combo : kCombos) {
    ProtocolPoint pt{combo.protocol, combo.relaying, 0.6, 0.3};
    const OutagePair coarse = evaluate(pt, SystemParams{});
    const OutagePair refined = evaluate(pt, SystemParams{}, fine);
    refinement = refinement &&
                 std::fabs(coarse.p_primary - refined.p_primary) <= 1e-9 &&
                 std::fabs(coarse.p_secondary - refined.p_secondary) <= 1e-9;
  }

  bool dominance = true;
  for (Protocol proto : {Protocol::TS, Protocol::PS})
    for (double alpha : {0.3, 0.7})
      for (double beta : {0.3, 0.6})
        for (double m : {0.5, 1.0, 1.5}) {
          SystemParams params;
          params.m = m;
          ProtocolPoint pt{proto, Relaying::DF, alpha, beta};
          const double df = evaluate(pt, params).p_secondary;
          pt.relaying = Relaying::AF;
          const double af = evaluate(pt, params).p_secondary;
          dominance = dominance && df + 1e-12 >= af;
        }

  bool round_trip = false;
  std::printf("  config round trip, two identical runs follow:\n");
  try {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ehcss_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    RunConfig config;
    config.params.snr_db = 30.0;
    config.params.m = 1.5;
    config.point = {Protocol::PS, Relaying::AF, 0.6, 0.25};
    config.engine = Engine::Both;
    config.trials = 20000;
    config.seed = 11;
    config.output_path = (dir / "a.csv").string();
    cmd_eval(config);
    RunConfig reloaded;
    std::ifstream record(dir / "a.csv.record");
    std::ostringstream text;
    text << record.rdbuf();
    parse_config_text(reloaded, text.str(), "record");
    reloaded.output_path = (dir / "b.csv").string();
    cmd_eval(reloaded);
    const auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      return s.str();
    };
    const std::string a = slurp(dir / "a.csv");
    round_trip = !a.empty() && a == slurp(dir / "b.csv");
  } catch (const std::exception&) {
    round_trip = false;
  }

  std::printf("  determinism=%s refinement=%s dominance=%s round_trip=%s\n",
              determinism ? "ok" : "FAIL", refinement ? "ok" : "FAIL",
              dominance ? "ok" : "FAIL", round_trip ? "ok" : "FAIL");
  verdict(10, determinism && refinement && dominance && round_trip,
          "determinism, refinement stability, dominance, config round trip");
}

}  // namespace

int main() {
  criterion_cross_engine();
  criterion_crossing();
  criterion_optimal_beta();
  criterion_ts_saturation();
  criterion_ps_af_monotone();
  criterion_protocol_comparison();
  criterion_relay_placement();
  criterion_product_cdf_oracle();
  criterion_eta_decrease();
  criterion_properties();
  std::printf("acceptance: %d/10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
