#include "ehcss/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace ehcss {

namespace {

double snr_threshold(double rate, double time_fraction, double block_time) {
  return std::exp2(2.0 * rate / (time_fraction * block_time)) - 1.0;
}

void require_mode(const ProtocolPoint& point, Protocol protocol, Relaying relaying,
                  const char* fn) {
  if (point.protocol != protocol || point.relaying != relaying)
    throw std::invalid_argument(std::string(fn) + ": point has the wrong protocol/relaying mode");
}

// Shared decode-and-forward structure: outage unless the relay decodes
// (first factor) and the harvested-power hop clears its threshold (second).
OutagePair df_pair(double m, const LinkStats& stats, const DerivedThresholds& th,
                   const QuadratureSpec& quad) {
  const double decode_ok = 1.0 - reg_lower_gamma(m, th.y1);
  const double relay_fail = gamma_product_cdf(m, stats.theta[0], stats.theta[1], th.z1, quad);
  const double secondary_fail = gamma_product_cdf(m, stats.theta[0], stats.theta[2], th.z2, quad);
  return {1.0 - decode_ok * (1.0 - relay_fail),
          1.0 - decode_ok * (1.0 - secondary_fail)};
}

// Shared amplify-and-forward structure: the primary outage integrates the
// composite-SNR tail; the secondary outage has no decode prerequisite.
OutagePair af_pair(double m, const LinkStats& stats, const DerivedThresholds& th,
                   const QuadratureSpec& quad) {
  const double primary =
      af_outage_integral(m, stats.theta[0], stats.theta[1], th.a, th.b, th.psi1, quad);
  const double secondary = gamma_product_cdf(m, stats.theta[0], stats.theta[2], th.z2, quad);
  return {primary, secondary};
}

}  // namespace

void ProtocolPoint::validate() const {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("ProtocolPoint: alpha must lie strictly in (0, 1)");
  if (!(beta > 0.0) || !(beta < 1.0))
    throw std::domain_error("ProtocolPoint: beta must lie strictly in (0, 1)");
}

DerivedThresholds thresholds_for(const ProtocolPoint& point,
                                 const SystemParams& params,
                                 const LinkStats& stats) {
  point.validate();
  params.validate();
  const double al = point.alpha, be = point.beta;
  const double p = params.transmit_power();
  const double t = params.block_time;
  const double s11 = params.noise_variances[0];
  const double s22 = params.noise_variances[1];
  const double s32 = params.noise_variances[2];
  const double harvest = params.eta * p * be;

  DerivedThresholds th;
  if (point.protocol == Protocol::TS) {
    if (point.relaying == Relaying::DF) {
      th.psi1 = snr_threshold(params.rp, 1.0 - be, t);
      th.psi2 = snr_threshold(params.rp, al * (1.0 - be), t);
      th.psi3 = snr_threshold(params.rs, (1.0 - al) * (1.0 - be), t);
      th.y1 = th.psi1 * s11 / (p * stats.theta[0]);
      th.z1 = al * (1.0 - be) * s22 * th.psi2 / (2.0 * harvest);
      th.z2 = (1.0 - al) * (1.0 - be) * s32 * th.psi3 / (2.0 * harvest);
    } else {
      th.psi1 = snr_threshold(params.rp, al * (1.0 - be), t);
      th.psi2 = snr_threshold(params.rs, (1.0 - al) * (1.0 - be), t);
      th.a = 2.0 * harvest / (al * (1.0 - be) * s22);
      th.b = p / s11;
      th.y1 = th.psi1 / (th.b * stats.theta[0]);
      th.z2 = (1.0 - al) * (1.0 - be) * s32 * th.psi2 / (2.0 * harvest);
    }
  } else {
    if (point.relaying == Relaying::DF) {
      th.psi1 = snr_threshold(params.rp, 1.0, t);
      th.psi2 = snr_threshold(params.rp, al, t);
      th.psi3 = snr_threshold(params.rs, 1.0 - al, t);
      th.y1 = th.psi1 * s11 / ((1.0 - be) * p * stats.theta[0]);
      th.z1 = al * s22 * th.psi2 / harvest;
      th.z2 = (1.0 - al) * s32 * th.psi3 / harvest;
    } else {
      th.psi1 = snr_threshold(params.rp, al, t);
      th.psi2 = snr_threshold(params.rs, 1.0 - al, t);
      th.a = harvest / (al * s22);
      th.b = (1.0 - be) * p / s11;
      // Lower limit from the positivity split of the composite ratio:
      // psi1/b, carried through the same y = Z/theta1 substitution as TS.
      th.y1 = th.psi1 / (th.b * stats.theta[0]);
      th.z2 = (1.0 - al) * s32 * th.psi2 / harvest;
    }
  }
  return th;
}

OutagePair outage_ts_df(const ProtocolPoint& point, const SystemParams& params,
                        const LinkStats& stats, const QuadratureSpec& quad) {
  require_mode(point, Protocol::TS, Relaying::DF, "outage_ts_df");
  return df_pair(params.m, stats, thresholds_for(point, params, stats), quad);
}

OutagePair outage_ts_af(const ProtocolPoint& point, const SystemParams& params,
                        const LinkStats& stats, const QuadratureSpec& quad) {
  require_mode(point, Protocol::TS, Relaying::AF, "outage_ts_af");
  return af_pair(params.m, stats, thresholds_for(point, params, stats), quad);
}

OutagePair outage_ps_df(const ProtocolPoint& point, const SystemParams& params,
                        const LinkStats& stats, const QuadratureSpec& quad) {
  require_mode(point, Protocol::PS, Relaying::DF, "outage_ps_df");
  return df_pair(params.m, stats, thresholds_for(point, params, stats), quad);
}

OutagePair outage_ps_af(const ProtocolPoint& point, const SystemParams& params,
                        const LinkStats& stats, const QuadratureSpec& quad) {
  require_mode(point, Protocol::PS, Relaying::AF, "outage_ps_af");
  return af_pair(params.m, stats, thresholds_for(point, params, stats), quad);
}

OutagePair evaluate(const ProtocolPoint& point, const SystemParams& params,
                    const QuadratureSpec& quad) {
  const LinkStats stats = derive_link_stats(params);
  if (point.protocol == Protocol::TS)
    return point.relaying == Relaying::DF ? outage_ts_df(point, params, stats, quad)
                                          : outage_ts_af(point, params, stats, quad);
  return point.relaying == Relaying::DF ? outage_ps_df(point, params, stats, quad)
                                        : outage_ps_af(point, params, stats, quad);
}

}  // namespace ehcss
