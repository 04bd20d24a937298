#ifndef EHCSS_ANALYTIC_HPP
#define EHCSS_ANALYTIC_HPP

#include "ehcss/channel.hpp"
#include "ehcss/specialfn.hpp"

namespace ehcss {

// Cooperation protocol: TS splits the block in time (harvest, decode,
// transmit), PS splits the received power between harvesting and decoding.
enum class Protocol { TS, PS };

// Relay behavior: DF decodes and stays silent on failure, AF forwards a
// scaled copy regardless.
enum class Relaying { DF, AF };

struct ProtocolPoint {
  Protocol protocol = Protocol::TS;
  Relaying relaying = Relaying::DF;
  double alpha = 0.5;  // relay share of the transmission slot
  double beta = 0.5;   // harvest share (time for TS, power for PS)

  // alpha and beta must be strictly interior; the exponents and power
  // ratios blow up at the endpoints, which are treated as limit cases.
  void validate() const;
};

struct OutagePair {
  double p_primary;
  double p_secondary;
};

// Mode-specific constants consumed by the closed forms: SNR thresholds
// psi (2^rate-ratio - 1), the decode / lower-limit argument y1, the
// product-CDF arguments z1, z2, and the AF composite coefficients a, b.
// Fields that a mode does not use are zero (psi3 and z1 in AF, a and b in DF).
struct DerivedThresholds {
  double psi1 = 0.0;
  double psi2 = 0.0;
  double psi3 = 0.0;
  double y1 = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double a = 0.0;
  double b = 0.0;
};

DerivedThresholds thresholds_for(const ProtocolPoint& point,
                                 const SystemParams& params,
                                 const LinkStats& stats);

OutagePair outage_ts_df(const ProtocolPoint& point, const SystemParams& params,
                        const LinkStats& stats, const QuadratureSpec& quad = {});
OutagePair outage_ts_af(const ProtocolPoint& point, const SystemParams& params,
                        const LinkStats& stats, const QuadratureSpec& quad = {});
OutagePair outage_ps_df(const ProtocolPoint& point, const SystemParams& params,
                        const LinkStats& stats, const QuadratureSpec& quad = {});
OutagePair outage_ps_af(const ProtocolPoint& point, const SystemParams& params,
                        const LinkStats& stats, const QuadratureSpec& quad = {});

// Derives link stats and dispatches to the matching outage evaluator.
OutagePair evaluate(const ProtocolPoint& point, const SystemParams& params,
                    const QuadratureSpec& quad = {});

}  // namespace ehcss

#endif
