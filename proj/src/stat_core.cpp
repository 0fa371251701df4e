#include "scaling/stat_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "scaling/errors.hpp"

namespace scaling {

namespace {

// Horner evaluation, coefficients in increasing order of power.
template <std::size_t N>
double poly(const double (&c)[N], double x) {
  double r = 0.0;
  for (std::size_t i = N; i-- > 0;) r = r * x + c[i];
  return r;
}

// Continued fraction for I_x(a, b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// I_x(a, b) with the complement y = 1 - x supplied separately so callers can
// avoid forming 1 - x by subtraction.
double ibeta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("normal_quantile: p must lie in [0, 1]");
  }
  static constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                                 1.9715909503065514427e+3, 1.3731693765509461125e+4,
                                 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                 3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[] = {1.0,
                                 4.2313330701600911252e+1, 6.8718700749205790830e+2,
                                 5.3941960214247511077e+3, 2.1213794301586595867e+4,
                                 3.9307895800092710610e+4, 2.8729085735721942674e+4,
                                 5.2264952788528545610e+3};
  static constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                 5.76949722146069140550e0, 3.64784832476320460504e0,
                                 1.27045825245236838258e0, 2.41780725177450611770e-1,
                                 2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[] = {1.0,
                                 2.05319162663775882187e0, 1.67638483018380384940e0,
                                 6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                 1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                 1.05075007164441684324e-9};
  static constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                 1.78482653991729133580e0, 2.96560571828504891230e-1,
                                 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                 2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[] = {1.0,
                                 5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                 1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                 1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                 2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(a, r) / poly(b, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val = 0.0;
  if (r <= 5.0) {
    r -= 1.6;
    val = poly(c, r) / poly(d, r);
  } else {
    r -= 5.0;
    val = poly(e, r) / poly(f, r);
  }
  return q < 0.0 ? -val : val;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x must lie in [0, 1]");
  return ibeta(a, b, x, 1.0 - x);
}

double f_cdf(double x, int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw DomainError("f_cdf: degrees of freedom must be positive");
  if (std::isnan(x) || x < 0.0) throw DomainError("f_cdf: x must be nonnegative");
  if (std::isinf(x)) return 1.0;
  const double num = d1 * x;
  const double den = num + d2;
  return ibeta(0.5 * d1, 0.5 * d2, num / den, d2 / den);
}

double f_sf(double x, int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw DomainError("f_sf: degrees of freedom must be positive");
  if (std::isnan(x) || x < 0.0) throw DomainError("f_sf: x must be nonnegative");
  if (std::isinf(x)) return 0.0;
  const double num = d1 * x;
  const double den = num + d2;
  return ibeta(0.5 * d2, 0.5 * d1, d2 / den, num / den);
}

double t_cdf(double t, int df) {
  if (df < 1) throw DomainError("t_cdf: df must be positive");
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double t2 = t * t;
  const double tail = 0.5 * ibeta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2));
  return t > 0.0 ? 1.0 - tail : tail;
}

double t_quantile(double p, int df) {
  if (df < 1) throw DomainError("t_quantile: df must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("t_quantile: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, df);

  // Solve upper tail 0.5 * I_{df/(df+t^2)}(df/2, 1/2) = 1 - p for t > 0.
  const double target = 1.0 - p;
  auto upper = [df](double t) {
    const double t2 = t * t;
    return 0.5 * ibeta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2));
  };
  double lo = 0.0, hi = 1.0;
  while (upper(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (upper(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

OlsFit ols(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) throw DataError("ols: need at least 2 points");
  const double n = static_cast<double>(pairs.size());
  double mu = 0.0, mv = 0.0;
  for (const auto& [u, v] : pairs) {
    mu += u;
    mv += v;
  }
  mu /= n;
  mv /= n;
  double suu = 0.0, suv = 0.0;
  for (const auto& [u, v] : pairs) {
    suu += (u - mu) * (u - mu);
    suv += (u - mu) * (v - mv);
  }
  if (!(suu > 0.0)) throw DataError("ols: singular design, all u values are equal");
  OlsFit fit;
  fit.n = pairs.size();
  fit.slope = suv / suu;
  fit.intercept = mv - fit.slope * mu;
  for (const auto& [u, v] : pairs) {
    const double r = v - (fit.slope * u + fit.intercept);
    fit.ssr += r * r;
  }
  return fit;
}

NormalityReport shapiro_wilk(std::span<const double> sample, double alpha) {
  // Royston (1995) polynomial approximations.
  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr double c3[] = {0.5440, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
  static constexpr double g[] = {-2.273, 0.459};

  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) {
    throw DomainError("shapiro_wilk: unsupported sample size " + std::to_string(n) +
                      " (need 3..5000)");
  }
  std::vector<double> x(sample.begin(), sample.end());
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("shapiro_wilk: sample contains non-finite values");
  }
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0)) throw DataError("shapiro_wilk: degenerate sample with zero variance");

  const std::size_t half = n / 2;
  const double an = static_cast<double>(n);
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
  } else {
    const double an25 = an + 0.25;
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      a[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / an25);
      summ2 += a[i] * a[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - a[0] / ssumm2;
    std::size_t first_scaled = 0;
    double fac = 0.0;
    if (n > 5) {
      const double a2 = -a[1] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[0] = a1;
      a[1] = a2;
      first_scaled = 2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
      a[0] = a1;
      first_scaled = 1;
    }
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -a[i] / fac;
  }

  // W = (sum a_i (x_(n+1-i) - x_(i)))^2 / sum (x - mean)^2, on range-scaled data.
  double mean = 0.0;
  for (double v : x) mean += v / range;
  mean /= an;
  double ssx = 0.0;
  for (double v : x) {
    const double dv = v / range - mean;
    ssx += dv * dv;
  }
  double num = 0.0;
  for (std::size_t i = 0; i < half; ++i) num += a[i] * (x[n - 1 - i] - x[i]) / range;
  const double w = std::min(1.0, num * num / ssx);

  NormalityReport report;
  report.n = n;
  report.w_stat = w;

  double pw = 1.0;
  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    const double stqr = std::asin(std::sqrt(0.75));
    pw = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
  } else {
    const double w1 = 1.0 - w;
    double y = std::log(w1);
    double m = 0.0, s = 1.0;
    bool tiny = false;
    if (n <= 11) {
      const double gamma = poly(g, an);
      if (y >= gamma) {
        tiny = true;
      } else {
        y = -std::log(gamma - y);
        m = poly(c3, an);
        s = std::exp(poly(c4, an));
      }
    } else {
      const double xx = std::log(an);
      m = poly(c5, xx);
      s = std::exp(poly(c6, xx));
    }
    pw = tiny ? 1e-19 : normal_cdf(-(y - m) / s);
  }
  report.p_value = pw;
  report.pass = pw >= alpha;
  return report;
}

}  // namespace scaling
