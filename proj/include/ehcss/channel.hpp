#ifndef EHCSS_CHANNEL_HPP
#define EHCSS_CHANNEL_HPP

#include <array>
#include <cstdint>
#include <random>

namespace ehcss {

// Physical configuration of the two-pair relay network. Defaults are the
// reference operating point: 40 dB transmit SNR, Rayleigh-equivalent shape,
// unit-distance primary hops and half-distance secondary links.
struct SystemParams {
  double snr_db = 40.0;       // P_p over the noise floor, decibels
  double m = 1.0;             // fading shape
  double eta = 1.0;           // harvesting efficiency, (0, 1]
  double v = 3.0;             // path-loss exponent
  double d1 = 1.0;            // PT-ST distance
  double d2 = 1.0;            // ST-PR distance
  double d3 = 0.5;            // ST-SR distance
  double d4 = 0.5;            // PT-SR distance
  double rp = 1.0;            // primary threshold rate, bits/s/Hz
  double rs = 1.0;            // secondary threshold rate, bits/s/Hz
  double block_time = 1.0;    // block duration T (unit choice only)
  // Noise variance per link-phase: PT-ST, ST-PR, ST-SR, PT-SR.
  std::array<double, 4> noise_variances{1.0, 1.0, 1.0, 1.0};

  void validate() const;

  // P_p = 10^(snr_db/10) * sigma^2, referenced to the PT-ST phase noise floor
  // (all four variances are equal in the default configuration).
  double transmit_power() const;
};

// Per-link Gamma statistics: mean power omega_i = d_i^-v, scale
// theta_i = omega_i / m. Index order matches noise_variances.
struct LinkStats {
  std::array<double, 4> omega;
  std::array<double, 4> theta;
};

// One realization of the four instantaneous channel power gains.
struct ChannelDraw {
  std::array<double, 4> gamma;
};

// Deterministic generator: a fixed (seed, stream) pair always reproduces the
// same draw sequence, independent of platform RNG library details, so all
// sampling distributions are implemented here rather than taken from
// <random>.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for chunked parallel simulation; the mapping
  // (seed, stream_id) -> initial state is a fixed bijective hash.
  static Rng substream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0,1): (k + 0.5) / 2^53.
  double uniform();

  // Standard normal (Box-Muller, second value cached).
  double normal();

  // Gamma(shape, scale) via Marsaglia-Tsang squeeze for shape >= 1 and the
  // power-of-uniform boost for shape < 1 (valid for all shape > 0).
  double gamma_variate(double shape, double scale);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

LinkStats derive_link_stats(const SystemParams& params);

// Independent Gamma(m, theta_i) power gain per link. The fourth link is
// sampled like the others to keep the stream layout stable even though no
// rate expression consumes it.
ChannelDraw sample_draw(const LinkStats& stats, double m, Rng& rng);

}  // namespace ehcss

#endif
