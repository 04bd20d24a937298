#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ehcss/channel.hpp"
#include "ehcss/specialfn.hpp"

using ehcss::ChannelDraw;
using ehcss::derive_link_stats;
using ehcss::LinkStats;
using ehcss::Rng;
using ehcss::sample_draw;
using ehcss::SystemParams;

TEST_CASE("link stats follow the path-loss law") {
  SystemParams params;  // d1 = d2 = 1, d3 = d4 = 0.5, v = 3, m = 1
  LinkStats stats = derive_link_stats(params);
  CHECK(stats.omega[0] == 1.0);
  CHECK(stats.theta[0] == 1.0);
  CHECK(stats.omega[2] == 8.0);
  CHECK(stats.theta[2] == 8.0);

  params.m = 2.0;
  stats = derive_link_stats(params);
  CHECK(stats.omega[0] == 1.0);
  CHECK(stats.theta[0] == 0.5);

  params.m = 1.5;
  params.v = 2.7;
  params.d2 = 1.3;
  stats = derive_link_stats(params);
  for (int i = 0; i < 4; ++i)
    CHECK(stats.theta[i] * params.m == doctest::Approx(stats.omega[i]).epsilon(1e-15));
}

TEST_CASE("system params validation") {
  SystemParams params;
  CHECK_NOTHROW(params.validate());
  CHECK(params.transmit_power() == doctest::Approx(1e4).epsilon(1e-12));

  SystemParams bad = params;
  bad.eta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = params;
  bad.eta = 1.2;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = params;
  bad.d2 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = params;
  bad.rp = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = params;
  bad.noise_variances[1] = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("generator determinism and stream independence") {
  Rng a(1234), b(1234), c(1235);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double va = a.uniform();
    all_equal = all_equal && (va == b.uniform());
    any_diff = any_diff || (va != c.uniform());
  }
  CHECK(all_equal);
  CHECK(any_diff);

  Rng s0 = Rng::substream(42, 0), s0b = Rng::substream(42, 0);
  Rng s1 = Rng::substream(42, 1);
  CHECK(s0.next_u64() == s0b.next_u64());
  CHECK(Rng::substream(42, 0).next_u64() != s1.next_u64());
}

TEST_CASE("gamma sampling moments across the tested shapes") {
  const int n = 1000000;
  for (double m : {0.5, 1.0, 1.5}) {
    const double theta = 0.8;
    Rng rng(777 + static_cast<int>(10 * m));
    double sum = 0.0, sum_sq = 0.0;
    bool all_nonnegative = true;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gamma_variate(m, theta);
      all_nonnegative = all_nonnegative && g >= 0.0;
      sum += g;
      sum_sq += g * g;
    }
    CHECK(all_nonnegative);
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    const double true_mean = m * theta;
    const double true_var = m * theta * theta;
    // Gamma central fourth moment: (3 + 6/m) * var^2.
    const double se_mean = std::sqrt(true_var / n);
    const double se_var = std::sqrt(((3.0 + 6.0 / m) * true_var * true_var -
                                     true_var * true_var) / n);
    CHECK(std::fabs(mean - true_mean) <= 4.0 * se_mean);
    CHECK(std::fabs(var - true_var) <= 4.0 * se_var);
  }
}

TEST_CASE("variance check at shape 2") {
  const int n = 1000000;
  Rng rng(9001);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gamma_variate(2.0, 0.5);
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  const double se_var = std::sqrt((3.0 + 6.0 / 2.0 - 1.0) * 0.25 * 0.25 / n);
  CHECK(std::fabs(var - 0.5) <= 3.0 * se_var);
}

TEST_CASE("sampled gains pass a Kolmogorov-Smirnov test") {
  const int n = 100000;
  for (double m : {0.5, 1.0, 1.5}) {
    const double theta = 1.7;
    Rng rng(31337 + static_cast<int>(100 * m));
    std::vector<double> xs(n);
    for (double& x : xs) x = rng.gamma_variate(m, theta);
    std::sort(xs.begin(), xs.end());
    double d_stat = 0.0;
    for (int i = 0; i < n; ++i) {
      const double cdf = ehcss::reg_lower_gamma(m, xs[i] / theta);
      d_stat = std::max(d_stat, std::fabs((i + 1.0) / n - cdf));
      d_stat = std::max(d_stat, std::fabs(cdf - static_cast<double>(i) / n));
    }
    // 1% critical value of the one-sample KS statistic.
    CHECK(d_stat * std::sqrt(static_cast<double>(n)) < 1.63);
  }
}

TEST_CASE("product of sampled gains matches the product CDF") {
  const int n = 1000000;
  SystemParams params;
  LinkStats stats = derive_link_stats(params);
  Rng rng(5150);
  int below = 0;
  for (int i = 0; i < n; ++i) {
    ChannelDraw draw = sample_draw(stats, params.m, rng);
    if (draw.gamma[0] * draw.gamma[1] <= 1.0) ++below;
  }
  const double p_emp = static_cast<double>(below) / n;
  const double p_ref = ehcss::gamma_product_cdf(1.0, stats.theta[0], stats.theta[1], 1.0);
  const double se = std::sqrt(p_ref * (1.0 - p_ref) / n);
  CHECK(std::fabs(p_emp - p_ref) <= 3.0 * se);
}

TEST_CASE("draws replay bit-for-bit under a fixed seed") {
  SystemParams params;
  params.m = 1.5;
  LinkStats stats = derive_link_stats(params);
  Rng r1(8800), r2(8800);
  for (int i = 0; i < 200; ++i) {
    ChannelDraw a = sample_draw(stats, params.m, r1);
    ChannelDraw b = sample_draw(stats, params.m, r2);
    for (int k = 0; k < 4; ++k) CHECK(a.gamma[k] == b.gamma[k]);
  }
}
