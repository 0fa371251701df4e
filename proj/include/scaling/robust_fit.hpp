#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scaling/data_ingest.hpp"
#include "scaling/scaling_models.hpp"

namespace scaling {

struct FitConfig {
  double huber_delta = 1.0;
  std::size_t n_starts = 16;
  std::size_t max_iters = 2000;
  double tol = 1e-12;
  std::uint64_t seed = 42;

  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

struct FitResult {
  ModelKind kind = ModelKind::Exponential;
  ModelParams params;
  std::vector<double> residuals;  // y_i - yhat_i
  double huber_loss = 0.0;
  double sigma2 = 0.0;            // Gaussian MLE variance, SSR / n (floored)
  std::vector<double> loglik;     // per-point Gaussian log-likelihood
  bool converged = false;
};

/// 0.5 r^2 inside [-delta, delta], delta (|r| - delta/2) outside.
double huber(double r, double delta);

/// Sum of Huber losses of (y - model(x)) over the series. +inf when the
/// model overflows at any point.
double total_huber_loss(const ScoreSeries& series, const ModelParams& params, double delta);

inline constexpr double kVarianceFloor = 1e-18;

struct GaussianLoglik {
  double sigma2 = 0.0;
  std::vector<double> loglik;
};

/// Gaussian log-likelihood of each residual under N(0, sigma2) where
/// sigma2 = sum(r^2)/n is the MLE, floored at kVarianceFloor.
GaussianLoglik loglik_gaussian(std::span<const double> residuals);

/// Deterministic start points for the multi-start search. The first is the
/// log-linear warm start; the rest are seeded log-uniform jitters of it.
std::vector<ModelParams> start_points(const ScoreSeries& series, ModelKind kind,
                                      const FitConfig& cfg);

/// Minimizes the total Huber loss from every start point with Nelder-Mead
/// and keeps the best. Throws DataError for fewer than 3 points or all sizes
/// equal, FitError when every start diverges.
FitResult fit(const ScoreSeries& series, ModelKind kind, const FitConfig& cfg = {});

/// Residuals, Huber loss and Gaussian log-likelihoods at fixed parameters.
FitResult evaluate_fit(const ScoreSeries& series, const ModelParams& params, double delta);

}  // namespace scaling
