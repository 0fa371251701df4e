#include "scaling/validation.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "scaling/errors.hpp"

namespace scaling {

std::string_view to_string(Preference p) {
  switch (p) {
    case Preference::Exponential: return "exponential";
    case Preference::PowerLaw: return "power_law";
    case Preference::Neither: break;
  }
  return "neither";
}

Preference parse_preference(std::string_view text) {
  if (text == "exponential") return Preference::Exponential;
  if (text == "power_law") return Preference::PowerLaw;
  if (text == "neither") return Preference::Neither;
  throw ParseError("unknown preference '" + std::string(text) + "'");
}

const ModelOutcome& ValidationVerdict::model(ModelKind kind) const {
  return kind == ModelKind::Exponential ? exponential : power_law;
}

std::string ValidationVerdict::cell_id() const {
  return family + "/" + dataset + "/" + metric + "/" + decoding;
}

std::optional<ModelKind> ValidationVerdict::sole_qualifier() const {
  if (exponential.gof.pass && !power_law.gof.pass) return ModelKind::Exponential;
  if (power_law.gof.pass && !exponential.gof.pass) return ModelKind::PowerLaw;
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k,
                                                 std::uint64_t seed) {
  if (k < 2) throw DataError("cross-validation needs at least 2 folds");
  if (n < k) {
    throw DataError("too few points for " + std::to_string(k) + "-fold cross-validation: " +
                    std::to_string(n) + " points");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t pos = 0; pos < n; ++pos) folds[pos % k].push_back(order[pos]);
  return folds;
}

CvReport stage1_cv(const ScoreSeries& series, ModelKind kind, const FitConfig& cfg,
                   std::size_t k, std::uint64_t seed) {
  const auto folds = make_folds(series.points.size(), k, seed);
  CvReport report;
  report.kind = kind;
  report.k = k;
  report.seed = seed;
  std::vector<bool> held(series.points.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::fill(held.begin(), held.end(), false);
    for (auto i : folds[f]) held[i] = true;
    ScoreSeries train = series;
    train.points.clear();
    for (std::size_t i = 0; i < series.points.size(); ++i) {
      if (!held[i]) train.points.push_back(series.points[i]);
    }
    FitResult trained;
    try {
      trained = fit(train, kind, cfg);
    } catch (const Error& e) {
      throw FitError("stage 1 failed on fold " + std::to_string(f) + ": " + e.what());
    }
    double loss = 0.0;
    for (auto i : folds[f]) {
      const auto& p = series.points[i];
      loss += huber(p.inconsistency - evaluate(trained.params, p.size_b), cfg.huber_delta);
    }
    report.fold_losses.push_back(loss / static_cast<double>(folds[f].size()));
  }
  report.mean_loss = std::accumulate(report.fold_losses.begin(), report.fold_losses.end(), 0.0) /
                     static_cast<double>(report.fold_losses.size());
  return report;
}

GofReport f_test_linear(std::span<const std::pair<double, double>> pairs, double alpha) {
  GofReport r;
  const std::size_t m = pairs.size();
  if (m < 3) {
    r.note = "need at least 3 points for the F-test";
    return r;
  }
  OlsFit line;
  try {
    line = ols(pairs);
  } catch (const Error& e) {
    r.note = e.what();
    return r;
  }
  double mean = 0.0;
  for (const auto& [u, v] : pairs) mean += v;
  mean /= static_cast<double>(m);
  double ssr_reduced = 0.0;
  for (const auto& [u, v] : pairs) ssr_reduced += (v - mean) * (v - mean);

  r.applicable = true;
  r.df_reduced = static_cast<int>(m) - 1;
  r.df_exact = static_cast<int>(m) - 2;
  r.ssr_reduced = ssr_reduced;
  // OLS with an intercept nests the mean model; clamp rounding noise.
  r.ssr_exact = std::min(line.ssr, ssr_reduced);
  const double numerator = (r.ssr_reduced - r.ssr_exact) / (r.df_reduced - r.df_exact);
  const double denominator = std::max(r.ssr_exact, kSsrFloor) / r.df_exact;
  r.f_stat = numerator / denominator;
  r.p_value = f_sf(r.f_stat, r.df_reduced - r.df_exact, r.df_exact);
  r.pass = r.p_value < alpha;
  return r;
}

GofReport stage2_gof(const ScoreSeries& series, ModelKind kind, const FitResult& fitted,
                     double alpha) {
  GofReport r;
  Linearized lin;
  try {
    lin = linearize(series, kind, offset_of(fitted.params));
  } catch (const DataError& e) {
    r.kind = kind;
    r.note = e.what();
    for (const auto& p : series.points) {
      if (!(p.inconsistency - offset_of(fitted.params) > kLogGuard)) ++r.dropped_points;
    }
    return r;
  }
  r = f_test_linear(lin.pairs, alpha);
  r.kind = kind;
  r.dropped_points = lin.dropped;
  return r;
}

VuongReport vuong(std::span<const double> ll_exp, std::span<const double> ll_pow,
                  double alpha) {
  if (ll_exp.size() != ll_pow.size()) {
    throw DataError("vuong: log-likelihood vectors differ in length");
  }
  const std::size_t n = ll_exp.size();
  if (n < 2) throw DataError("vuong: need at least 2 observations");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = ll_exp[i] - ll_pow[i];
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var < kVarianceFloor) {
    throw DataError("vuong: indistinguishable models, log-likelihood differences have zero variance");
  }
  VuongReport r;
  r.n = n;
  r.v_stat = std::sqrt(static_cast<double>(n)) * mean / std::sqrt(var);
  r.p_value = 2.0 * normal_cdf(-std::abs(r.v_stat));
  r.significant = r.p_value < alpha;
  if (r.significant) {
    r.preferred = r.v_stat > 0.0 ? Preference::Exponential : Preference::PowerLaw;
  }
  return r;
}

namespace {

ModelOutcome assess_model(const ScoreSeries& series, ModelKind kind, const FrameworkConfig& cfg,
                          std::optional<FitResult>& fitted, StageCounters* counters) {
  ModelOutcome out;
  out.kind = kind;
  out.gof.kind = kind;
  out.params = from_vector(kind, {0.0, 0.0, 0.0});
  try {
    fitted = fit(series, kind, cfg.fit);
  } catch (const FitError& e) {
    out.error = e.what();
    out.gof.note = "model could not be fitted";
    return out;
  }
  out.fitted = true;
  out.params = fitted->params;
  out.huber_loss = fitted->huber_loss;
  out.sigma2 = fitted->sigma2;
  out.converged = fitted->converged;

  try {
    out.stage1 = stage1_cv(series, kind, cfg.fit, cfg.folds, cfg.seed);
  } catch (const FitError& e) {
    out.error = e.what();
  }

  try {
    out.normality = shapiro_wilk(fitted->residuals, cfg.normality_alpha);
  } catch (const Error& e) {
    out.normality_note = e.what();
  }

  if (counters) ++counters->gof_calls;
  out.gof = stage2_gof(series, kind, *fitted, cfg.gof_alpha);
  return out;
}

}  // namespace

ValidationVerdict run_framework(const ScoreSeries& series, const FrameworkConfig& cfg,
                                StageCounters* counters) {
  if (series.points.size() < 3) {
    throw DataError("cell " + series.cell_id() + " has fewer than 3 points");
  }
  // Surface the fold precondition before any fitting.
  make_folds(series.points.size(), cfg.folds, cfg.seed);

  ValidationVerdict v;
  v.family = series.family;
  v.dataset = series.dataset;
  v.metric = series.metric;
  v.decoding = series.decoding;

  std::optional<FitResult> exp_fit, pow_fit;
  v.exponential = assess_model(series, ModelKind::Exponential, cfg, exp_fit, counters);
  v.power_law = assess_model(series, ModelKind::PowerLaw, cfg, pow_fit, counters);

  if (!exp_fit && !pow_fit) {
    v.error = "both fits failed: " + v.exponential.error + "; " + v.power_law.error;
    return v;
  }

  if (v.exponential.gof.pass && v.power_law.gof.pass) {
    v.stage3_run = true;
    if (counters) ++counters->vuong_calls;
    try {
      v.vuong = vuong(exp_fit->loglik, pow_fit->loglik, cfg.vuong_alpha);
    } catch (const DataError& e) {
      v.vuong = VuongReport{0.0, 1.0, series.points.size(), Preference::Neither, false};
      v.vuong_note = e.what();
    }
    if (v.vuong->significant) {
      v.effective_law = v.vuong->preferred == Preference::Exponential ? ModelKind::Exponential
                                                                      : ModelKind::PowerLaw;
    }
  }
  return v;
}

std::uint64_t derive_cell_seed(std::uint64_t master, const ScoreSeries& series) {
  // FNV-1a over the cell id, then a splitmix64 finalizer.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : series.cell_id()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = master ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace scaling
