#ifndef EHCSS_MONTECARLO_HPP
#define EHCSS_MONTECARLO_HPP

#include <cstdint>
#include <utility>

#include "ehcss/analytic.hpp"
#include "ehcss/channel.hpp"

namespace ehcss {

struct OutageEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct TrialOutcome {
  bool primary_outage = false;
  bool secondary_outage = false;
  // Decode success at the relay. Always true in AF, which forwards
  // regardless; in DF a failed decode silences the relay and both users
  // are in outage.
  bool st_decoded = true;
};

// Evaluates the instantaneous achieved rates for one channel realization and
// compares them against the threshold rates. Success requires the strict
// inequality rate > threshold; a tie counts as outage (ties have probability
// zero under continuous fading, but the convention must be fixed for
// reproducibility).
TrialOutcome run_trial(const ProtocolPoint& point, const SystemParams& params,
                       const ChannelDraw& draw);

// Outage estimates for (primary, secondary) over `trials` independent draws.
// Trials are processed in fixed chunks of 2^16, each on its own substream of
// `seed`, so the result is a deterministic function of (seed, trials) no
// matter how chunks are scheduled across workers.
std::pair<OutageEstimate, OutageEstimate> estimate_outage(const ProtocolPoint& point,
                                                          const SystemParams& params,
                                                          std::uint64_t trials,
                                                          std::uint64_t seed);

}  // namespace ehcss

#endif
