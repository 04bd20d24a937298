#include "ehcss/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace ehcss {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();
constexpr int kMaxGammaIter = 10000;

void check_gamma_domain(double m, double x) {
  if (!(m > 0.0)) throw std::domain_error("incomplete gamma: shape must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("incomplete gamma: argument must be >= 0");
}

// Lower-tail series: P(m, x) = x^m e^-x / Gamma(m+1) * sum_k x^k / ((m+1)...(m+k)).
double lower_series(double m, double x) {
  double ap = m;
  double del = 1.0 / m;
  double sum = del;
  for (int i = 0; i < kMaxGammaIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps)
      return sum * std::exp(-x + m * std::log(x) - std::lgamma(m));
  }
  throw QuadratureError("incomplete gamma series did not converge");
}

// Upper-tail continued fraction (modified Lentz).
double upper_cf(double m, double x) {
  double b = x + 1.0 - m;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaIter; ++i) {
    const double an = -i * (i - m);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps)
      return h * std::exp(-x + m * std::log(x) - std::lgamma(m));
  }
  throw QuadratureError("incomplete gamma continued fraction did not converge");
}

// 15-point Kronrod rule with embedded 7-point Gauss (nodes are the positive
// half; the rule is symmetric). Error estimate per panel is |K15 - G7|.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, integral, error;
};

struct PanelWorse {
  bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

template <class F>
Panel eval_panel(const F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  if (!std::isfinite(fc)) throw QuadratureError("non-finite integrand value");
  double k15 = kWgk[7] * fc;
  double g7 = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    if (!std::isfinite(fsum)) throw QuadratureError("non-finite integrand value");
    k15 += kWgk[i] * fsum;
    if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
  }
  return Panel{lo, hi, k15 * h, std::fabs((k15 - g7) * h)};
}

// Globally adaptive integration over the panels delimited by `points`
// (strictly increasing). Splits the worst panel until the summed error
// estimate meets max(abs_tol, rel_tol * |integral|).
template <class F>
double adaptive_integrate(const F& f, const std::vector<double>& points,
                          const QuadratureSpec& spec, const char* label) {
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Panel p = eval_panel(f, points[i], points[i + 1]);
    total += p.integral;
    err += p.error;
    heap.push(p);
  }
  int splits = 0;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
    if (splits >= spec.max_subdivisions)
      throw QuadratureError(std::string(label) + ": tolerance not reached within max_subdivisions");
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi)
      throw QuadratureError(std::string(label) + ": panel width reached rounding limit");
    Panel left = eval_panel(f, worst.lo, mid);
    Panel right = eval_panel(f, mid, worst.hi);
    total += left.integral + right.integral - worst.integral;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Re-sum the final panel set so the result carries no incremental drift.
  double exact = 0.0;
  while (!heap.empty()) {
    exact += heap.top().integral;
    heap.pop();
  }
  return exact;
}

// Smallest T (up to a factor ~1.5) with Q(m, T) <= mass; the Gamma(m,1)
// envelope beyond T then bounds the discarded integrand mass.
double envelope_cutoff(double m, double mass) {
  double t = m + 10.0 * std::sqrt(m) + 35.0;
  for (int i = 0; i < 400; ++i) {
    if (reg_upper_gamma(m, t) <= mass) return t;
    t *= 1.5;
  }
  throw QuadratureError("envelope cutoff search failed");
}

// Sorted, deduplicated split points clamped to the open interval (lo, hi),
// with lo and hi added as the outer delimiters.
std::vector<double> make_points(std::vector<double> interior, double lo, double hi) {
  std::vector<double> pts;
  pts.push_back(lo);
  std::sort(interior.begin(), interior.end());
  for (double p : interior) {
    if (p <= lo || p >= hi) continue;
    if (p - pts.back() > 1e-12 * std::max(1.0, std::fabs(p))) pts.push_back(p);
  }
  pts.push_back(hi);
  return pts;
}

double clamp_probability(double p, const char* label) {
  const double slack = 1e-6;
  if (p < -slack || p > 1.0 + slack)
    throw QuadratureError(std::string(label) + ": result escaped [0,1] beyond tolerance");
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw std::domain_error("QuadratureSpec: tolerances must be > 0");
  if (max_subdivisions < 1)
    throw std::domain_error("QuadratureSpec: max_subdivisions must be >= 1");
  if (!(tail_cutoff_mass > 0.0) || !(tail_cutoff_mass < 1e-10))
    throw std::domain_error("QuadratureSpec: tail_cutoff_mass must lie in (0, 1e-10)");
}

double reg_lower_gamma(double m, double x) {
  check_gamma_domain(m, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < m + 1.0) return lower_series(m, x);
  return 1.0 - upper_cf(m, x);
}

double reg_upper_gamma(double m, double x) {
  check_gamma_domain(m, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < m + 1.0) return 1.0 - lower_series(m, x);
  return upper_cf(m, x);
}

double gamma_product_cdf(double m, double theta_a, double theta_b, double z,
                         const QuadratureSpec& quad) {
  if (!(m > 0.0)) throw std::domain_error("gamma_product_cdf: shape must be > 0");
  if (!(theta_a > 0.0) || !(theta_b > 0.0))
    throw std::domain_error("gamma_product_cdf: scales must be > 0");
  if (!(z >= 0.0)) throw std::domain_error("gamma_product_cdf: z must be >= 0");
  quad.validate();
  if (z == 0.0) return 0.0;

  const double w = z / (theta_a * theta_b);
  const double t_max = envelope_cutoff(m, quad.tail_cutoff_mass);
  const double lg = std::lgamma(m);
  // Transition of the inner CDF sits near t ~ w/(m+1); the envelope peaks
  // near t ~ m. Seed panels around both scales.
  std::vector<double> interior = {w / (m + 1.0), std::sqrt(w), std::max(m, 1.0),
                                  2.0 * std::max(m, 1.0) + 3.0};

  double integral;
  if (m >= 1.0) {
    auto f = [&](double t) {
      return std::exp((m - 1.0) * std::log(t) - t - lg) * reg_lower_gamma(m, w / t);
    };
    integral = adaptive_integrate(f, make_points(interior, 0.0, t_max), quad,
                                  "gamma_product_cdf");
  } else {
    // Substitute t = s^(1/m): t^(m-1) dt = ds / m, which removes the
    // endpoint singularity of the shape-below-one envelope.
    const double inv_m = 1.0 / m;
    const double norm = std::exp(-lg) * inv_m;
    auto f = [&](double s) {
      const double t = std::pow(s, inv_m);
      return norm * std::exp(-t) * reg_lower_gamma(m, w / t);
    };
    for (double& p : interior) p = std::pow(p, m);
    integral = adaptive_integrate(f, make_points(interior, 0.0, std::pow(t_max, m)),
                                  quad, "gamma_product_cdf");
  }
  return clamp_probability(integral, "gamma_product_cdf");
}

double af_outage_integral(double m, double theta1, double theta2, double a,
                          double b, double psi1, const QuadratureSpec& quad) {
  if (!(m > 0.0) || !(theta1 > 0.0) || !(theta2 > 0.0) || !(a > 0.0) ||
      !(b > 0.0) || !(psi1 > 0.0))
    throw std::domain_error("af_outage_integral: all parameters must be > 0");
  quad.validate();

  const double y1 = psi1 / (b * theta1);
  // If the envelope mass above the lower limit is already below the cutoff,
  // the survival integral is provably below it too.
  if (reg_upper_gamma(m, y1) <= quad.tail_cutoff_mass) return 1.0;

  const double t_max = envelope_cutoff(m, quad.tail_cutoff_mass);
  const double u_max = t_max - y1;
  const double lg = std::lgamma(m);
  const double bt1 = b * theta1;
  const double scale = psi1 / (theta1 * theta2 * a * bt1);

  // In u = y - Y1 the upper-gamma argument is
  //   psi1 (b th1 (Y1+u) + 1) / (th1 th2 a (Y1+u) b th1 u),
  // positive for all u > 0. Near u = 0 it behaves like C/u with
  // C = (psi1+1)/(th1 th2 a); the integrand turns on once the argument
  // drops to O(m), so seed log-spaced panels around that boundary layer.
  auto f = [&](double u) {
    const double y = y1 + u;
    const double arg = scale * (bt1 * y + 1.0) / (y * u);
    return std::exp((m - 1.0) * std::log(y) - y - lg) * reg_upper_gamma(m, arg);
  };

  const double u_star = (psi1 + 1.0) / (theta1 * theta2 * a * (m + 3.0));
  std::vector<double> interior;
  for (double f10 = 1e-3; f10 <= 1e3; f10 *= 10.0) interior.push_back(u_star * f10);
  interior.insert(interior.end(), {y1, 10.0 * y1, 1.0, 5.0, 15.0, 45.0});

  const double survival =
      adaptive_integrate(f, make_points(interior, 0.0, u_max), quad, "af_outage_integral");
  return clamp_probability(1.0 - survival, "af_outage_integral");
}

}  // namespace ehcss
