#include "ehcss/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ehcss {

namespace {

constexpr std::uint64_t kChunkSize = 1u << 16;

double rate(double slot_time, double snr) { return 0.5 * slot_time * std::log2(1.0 + snr); }

double composite_snr(double first_hop, double relayed) {
  // Exact amplified-relay ratio including the +1 noise term; no high-SNR
  // approximation.
  return relayed * first_hop / (relayed + first_hop + 1.0);
}

struct TrialCounts {
  std::uint64_t primary = 0;
  std::uint64_t secondary = 0;
};

}  // namespace

TrialOutcome run_trial(const ProtocolPoint& point, const SystemParams& params,
                       const ChannelDraw& draw) {
  const double p = params.transmit_power();
  const double t = params.block_time;
  const double al = point.alpha, be = point.beta;
  const double g1 = draw.gamma[0], g2 = draw.gamma[1], g3 = draw.gamma[2];
  const double s11 = params.noise_variances[0];
  const double s22 = params.noise_variances[1];
  const double s32 = params.noise_variances[2];

  TrialOutcome out;
  if (point.protocol == Protocol::TS) {
    // Harvest beta*T, decode (1-beta)T/2, transmit (1-beta)T/2 split
    // alpha : (1-alpha); the harvested energy eta*beta*T*P*g1 is spent over
    // the respective transmit slot.
    const double tx_slot = (1.0 - be) * t;
    const double relay_power = 2.0 * params.eta * be * p * g1 / (al * (1.0 - be));
    const double own_power = 2.0 * params.eta * be * p * g1 / ((1.0 - al) * (1.0 - be));
    const double r_sr = rate((1.0 - al) * tx_slot, own_power * g3 / s32);

    if (point.relaying == Relaying::DF) {
      const double r_st = rate(tx_slot, p * g1 / s11);
      out.st_decoded = r_st > params.rp;
      if (!out.st_decoded) {
        out.primary_outage = true;
        out.secondary_outage = true;
        return out;
      }
      const double r_pr = rate(al * tx_slot, relay_power * g2 / s22);
      out.primary_outage = !(r_pr > params.rp);
      out.secondary_outage = !(r_sr > params.rs);
    } else {
      const double r_pr =
          rate(al * tx_slot, composite_snr(p * g1 / s11, relay_power * g2 / s22));
      out.primary_outage = !(r_pr > params.rp);
      out.secondary_outage = !(r_sr > params.rs);
    }
  } else {
    // Power split over the first half block: beta harvested,
    // (1-beta) decoded; second half split alpha : (1-alpha).
    const double relay_power = params.eta * be * p * g1 / al;
    const double own_power = params.eta * be * p * g1 / (1.0 - al);
    const double r_sr = rate((1.0 - al) * t, own_power * g3 / s32);

    if (point.relaying == Relaying::DF) {
      const double r_st = rate(t, (1.0 - be) * p * g1 / s11);
      out.st_decoded = r_st > params.rp;
      if (!out.st_decoded) {
        out.primary_outage = true;
        out.secondary_outage = true;
        return out;
      }
      const double r_pr = rate(al * t, relay_power * g2 / s22);
      out.primary_outage = !(r_pr > params.rp);
      out.secondary_outage = !(r_sr > params.rs);
    } else {
      const double r_pr = rate(
          al * t, composite_snr((1.0 - be) * p * g1 / s11, relay_power * g2 / s22));
      out.primary_outage = !(r_pr > params.rp);
      out.secondary_outage = !(r_sr > params.rs);
    }
  }
  return out;
}

std::pair<OutageEstimate, OutageEstimate> estimate_outage(const ProtocolPoint& point,
                                                          const SystemParams& params,
                                                          std::uint64_t trials,
                                                          std::uint64_t seed) {
  if (trials < 1) throw std::domain_error("estimate_outage: trials must be >= 1");
  point.validate();
  const LinkStats stats = derive_link_stats(params);
  const std::uint64_t n_chunks = (trials + kChunkSize - 1) / kChunkSize;

  auto run_chunk = [&](std::uint64_t chunk) {
    const std::uint64_t begin = chunk * kChunkSize;
    const std::uint64_t count = std::min(kChunkSize, trials - begin);
    Rng rng = Rng::substream(seed, chunk);
    TrialCounts counts;
    for (std::uint64_t i = 0; i < count; ++i) {
      const ChannelDraw draw = sample_draw(stats, params.m, rng);
      const TrialOutcome outcome = run_trial(point, params, draw);
      counts.primary += outcome.primary_outage;
      counts.secondary += outcome.secondary_outage;
    }
    return counts;
  };

  TrialCounts total;
  const unsigned workers = std::min<std::uint64_t>(
      std::max(1u, std::thread::hardware_concurrency()), n_chunks);
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      const TrialCounts counts = run_chunk(c);
      total.primary += counts.primary;
      total.secondary += counts.secondary;
    }
  } else {
    // Chunk order does not matter: counts are integers and every chunk has
    // its own substream, so any scheduling yields the same totals.
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> primary{0}, secondary{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t c; (c = next.fetch_add(1)) < n_chunks;) {
          const TrialCounts counts = run_chunk(c);
          primary.fetch_add(counts.primary);
          secondary.fetch_add(counts.secondary);
        }
      });
    }
    for (std::thread& th : pool) th.join();
    total.primary = primary.load();
    total.secondary = secondary.load();
  }

  auto finish = [&](std::uint64_t count) {
    OutageEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.p_hat = static_cast<double>(count) / static_cast<double>(trials);
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
    return est;
  };
  return {finish(total.primary), finish(total.secondary)};
}

}  // namespace ehcss
