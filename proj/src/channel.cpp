#include "ehcss/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ehcss {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0))
    throw std::domain_error(std::string("SystemParams: ") + name + " must be > 0");
}

}  // namespace

void SystemParams::validate() const {
  if (!std::isfinite(snr_db))
    throw std::domain_error("SystemParams: snr_db must be finite");
  require_positive(m, "m");
  if (!(eta > 0.0) || !(eta <= 1.0))
    throw std::domain_error("SystemParams: eta must lie in (0, 1]");
  require_positive(v, "v");
  require_positive(d1, "d1");
  require_positive(d2, "d2");
  require_positive(d3, "d3");
  require_positive(d4, "d4");
  require_positive(rp, "rp");
  require_positive(rs, "rs");
  require_positive(block_time, "block_time");
  // A zero variance would put infinite SNR on one link-phase and divide the
  // threshold expressions by zero, so strict positivity is required.
  for (double s : noise_variances) require_positive(s, "noise variance");
}

double SystemParams::transmit_power() const {
  return std::pow(10.0, snr_db / 10.0) * noise_variances[0];
}

LinkStats derive_link_stats(const SystemParams& params) {
  params.validate();
  LinkStats stats{};
  const double d[4] = {params.d1, params.d2, params.d3, params.d4};
  for (int i = 0; i < 4; ++i) {
    stats.omega[i] = std::pow(d[i], -params.v);
    stats.theta[i] = stats.omega[i] / params.m;
  }
  return stats;
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::substream(std::uint64_t seed, std::uint64_t stream_id) {
  return Rng(splitmix64(seed) ^ splitmix64(~stream_id));
}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 6.283185307179586476925286766559 * uniform();
  spare_normal_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

double Rng::gamma_variate(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::domain_error("gamma_variate: shape and scale must be > 0");
  if (shape < 1.0) {
    // Boost from shape+1: G(k) = G(k+1) * U^(1/k).
    const double u = uniform();
    return gamma_variate(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, t;
    do {
      x = normal();
      t = 1.0 + c * x;
    } while (t <= 0.0);
    const double vcb = t * t * t;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * vcb * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - vcb + std::log(vcb))) return d * vcb * scale;
  }
}

ChannelDraw sample_draw(const LinkStats& stats, double m, Rng& rng) {
  ChannelDraw draw{};
  for (int i = 0; i < 4; ++i) draw.gamma[i] = rng.gamma_variate(m, stats.theta[i]);
  return draw;
}

}  // namespace ehcss
