#include "scaling/robust_fit.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "scaling/errors.hpp"
#include "scaling/nelder_mead.hpp"

namespace scaling {

namespace {

// Least-squares line through (u, v); falls back to a flat line when the
// design is degenerate.
std::pair<double, double> slope_intercept(const std::vector<double>& u,
                                          const std::vector<double>& v) {
  const double n = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double suu = 0.0, suv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
  }
  if (!(suu > 0.0)) return {0.0, mv};
  const double slope = suv / suu;
  return {slope, mv - slope * mu};
}

}  // namespace

double huber(double r, double delta) {
  const double a = std::abs(r);
  return a <= delta ? 0.5 * r * r : delta * (a - 0.5 * delta);
}

double total_huber_loss(const ScoreSeries& series, const ModelParams& params, double delta) {
  double total = 0.0;
  for (const auto& p : series.points) {
    const double yhat = evaluate(params, p.size_b);
    if (!std::isfinite(yhat)) return std::numeric_limits<double>::infinity();
    total += huber(p.inconsistency - yhat, delta);
  }
  return total;
}

GaussianLoglik loglik_gaussian(std::span<const double> residuals) {
  if (residuals.empty()) throw DataError("loglik_gaussian: no residuals");
  double ssr = 0.0;
  for (double r : residuals) ssr += r * r;
  GaussianLoglik out;
  out.sigma2 = std::max(ssr / static_cast<double>(residuals.size()), kVarianceFloor);
  const double norm = -0.5 * std::log(2.0 * std::numbers::pi * out.sigma2);
  out.loglik.reserve(residuals.size());
  for (double r : residuals) out.loglik.push_back(norm - r * r / (2.0 * out.sigma2));
  return out;
}

std::vector<ModelParams> start_points(const ScoreSeries& series, ModelKind kind,
                                      const FitConfig& cfg) {
  double ymin = std::numeric_limits<double>::infinity();
  for (const auto& p : series.points) ymin = std::min(ymin, p.inconsistency);
  const double offset0 = 0.9 * ymin;

  std::vector<double> u, v;
  for (const auto& p : series.points) {
    const double shifted = p.inconsistency - offset0;
    if (shifted <= 0.0) continue;
    u.push_back(kind == ModelKind::PowerLaw ? std::log(p.size_b) : p.size_b);
    v.push_back(std::log(shifted));
  }
  double rate0 = 0.0, amp0 = std::abs(ymin) > 0.0 ? 0.1 * std::abs(ymin) : 1e-3;
  if (u.size() >= 2) {
    const auto [slope, intercept] = slope_intercept(u, v);
    rate0 = slope;
    amp0 = std::exp(intercept);
  }
  if (!std::isfinite(amp0)) amp0 = 1.0;

  std::vector<ModelParams> starts;
  starts.reserve(cfg.n_starts);
  const std::array<double, 3> warm{amp0, rate0, offset0};
  starts.push_back(from_vector(kind, warm));

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> log_factor(std::log(0.25), std::log(4.0));
  while (starts.size() < cfg.n_starts) {
    std::array<double, 3> jittered = warm;
    for (auto& value : jittered) value *= std::exp(log_factor(rng));
    starts.push_back(from_vector(kind, jittered));
  }
  return starts;
}

FitResult evaluate_fit(const ScoreSeries& series, const ModelParams& params, double delta) {
  FitResult r;
  r.kind = kind_of(params);
  r.params = params;
  r.residuals.reserve(series.points.size());
  for (const auto& p : series.points) {
    const double res = p.inconsistency - evaluate(params, p.size_b);
    r.residuals.push_back(res);
    r.huber_loss += huber(res, delta);
  }
  auto ll = loglik_gaussian(r.residuals);
  r.sigma2 = ll.sigma2;
  r.loglik = std::move(ll.loglik);
  return r;
}

FitResult fit(const ScoreSeries& series, ModelKind kind, const FitConfig& cfg) {
  if (series.points.size() < 3) {
    throw DataError("fit needs at least 3 points, got " + std::to_string(series.points.size()));
  }
  if (!(cfg.huber_delta > 0.0) || !(cfg.tol > 0.0) || cfg.n_starts == 0 || cfg.max_iters == 0) {
    throw DomainError("invalid fit configuration");
  }
  bool varied = false;
  for (const auto& p : series.points) {
    if (!(p.size_b > 0.0)) throw DataError("fit requires positive sizes");
    if (p.size_b != series.points.front().size_b) varied = true;
  }
  if (!varied) throw DataError("degenerate series: all sizes are equal");

  const Objective objective = [&](std::span<const double> v) {
    return total_huber_loss(series, from_vector(kind, {v[0], v[1], v[2]}), cfg.huber_delta);
  };
  NelderMeadOptions opt;
  opt.max_iters = cfg.max_iters;
  opt.ftol = cfg.tol;

  bool found = false;
  NelderMeadResult best;
  for (const auto& start : start_points(series, kind, cfg)) {
    const auto v = to_vector(start);
    auto r = nelder_mead(objective, {v.begin(), v.end()}, opt);
    if (!std::isfinite(r.f)) continue;
    // Strict improvement only: ties keep the earlier start.
    if (!found || r.f < best.f) {
      best = std::move(r);
      found = true;
    }
  }
  if (!found) {
    throw FitError("fit failed: all " + std::to_string(cfg.n_starts) + " starts diverged for " +
                   std::string(to_string(kind)) + " model on " + series.cell_id());
  }

  FitResult result =
      evaluate_fit(series, from_vector(kind, {best.x[0], best.x[1], best.x[2]}), cfg.huber_delta);
  result.converged = best.converged;
  return result;
}

}  // namespace scaling
