#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace scaling {

double normal_cdf(double z);
/// Inverse of normal_cdf (Wichura's AS 241, about 1e-16 relative accuracy).
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// CDF of the F(d1, d2) distribution. Throws DomainError for x < 0.
double f_cdf(double x, int d1, int d2);
/// Upper tail 1 - f_cdf, computed without cancellation.
double f_sf(double x, int d1, int d2);

double t_cdf(double t, int df);
/// Inverse CDF of Student's t. Throws DomainError unless 0 < p < 1.
double t_quantile(double p, int df);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ssr = 0.0;
  std::size_t n = 0;
};

/// Least squares line v = slope * u + intercept. Throws DataError for fewer
/// than 2 points or when every u is equal (singular design).
OlsFit ols(std::span<const std::pair<double, double>> pairs);

struct NormalityReport {
  double w_stat = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;
  bool pass = false;  // p_value >= alpha

  friend bool operator==(const NormalityReport&, const NormalityReport&) = default;
};

/// Shapiro-Wilk W test for complete samples, 3 <= n <= 5000, following
/// Royston's AS R94 algorithm. Throws DomainError for unsupported sizes and
/// DataError for a zero-variance sample.
NormalityReport shapiro_wilk(std::span<const double> sample, double alpha = 0.05);

}  // namespace scaling
