#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scaling/data_ingest.hpp"
#include "scaling/robust_fit.hpp"
#include "scaling/scaling_models.hpp"
#include "scaling/stat_core.hpp"

namespace scaling {

struct FrameworkConfig {
  FitConfig fit;
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  double gof_alpha = 0.05;
  double vuong_alpha = 0.005;
  double normality_alpha = 0.05;

  friend bool operator==(const FrameworkConfig&, const FrameworkConfig&) = default;
};

/// Stage I: held-out Huber loss per fold.
struct CvReport {
  ModelKind kind = ModelKind::Exponential;
  std::vector<double> fold_losses;  // mean per-point loss on each held-out fold
  double mean_loss = 0.0;           // unweighted mean over folds
  std::size_t k = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const CvReport&, const CvReport&) = default;
};

/// Stage II: F-test of the log-linearized model against the mean-response model.
struct GofReport {
  ModelKind kind = ModelKind::Exponential;
  double f_stat = 0.0;
  int df_reduced = 0;
  int df_exact = 0;
  double ssr_reduced = 0.0;
  double ssr_exact = 0.0;
  double p_value = 1.0;
  bool pass = false;
  std::size_t dropped_points = 0;
  bool applicable = false;
  std::string note;

  friend bool operator==(const GofReport&, const GofReport&) = default;
};

enum class Preference { Exponential, PowerLaw, Neither };

std::string_view to_string(Preference p);
Preference parse_preference(std::string_view text);

/// Stage III: Vuong's test. Positive v_stat favors the exponential model.
struct VuongReport {
  double v_stat = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  Preference preferred = Preference::Neither;
  bool significant = false;

  friend bool operator==(const VuongReport&, const VuongReport&) = default;
};

struct ModelOutcome {
  ModelKind kind = ModelKind::Exponential;
  bool fitted = false;
  ModelParams params;
  double huber_loss = 0.0;
  double sigma2 = 0.0;
  bool converged = false;
  std::optional<CvReport> stage1;
  GofReport gof;
  std::optional<NormalityReport> normality;
  /// Fit or Stage I failure, or why the normality screen could not run.
  std::string error;
  std::string normality_note;

  friend bool operator==(const ModelOutcome&, const ModelOutcome&) = default;
};

struct ValidationVerdict {
  std::string family;
  std::string dataset;
  std::string metric;
  std::string decoding;
  ModelOutcome exponential;
  ModelOutcome power_law;
  bool stage3_run = false;
  std::optional<VuongReport> vuong;
  std::string vuong_note;
  std::optional<ModelKind> effective_law;
  /// Set when neither model could be fitted.
  std::string error;

  const ModelOutcome& model(ModelKind kind) const;
  std::string cell_id() const;
  /// The single model that passed Stage II when the other failed.
  std::optional<ModelKind> sole_qualifier() const;

  friend bool operator==(const ValidationVerdict&, const ValidationVerdict&) = default;
};

/// Instrumentation for gating checks.
struct StageCounters {
  std::size_t gof_calls = 0;
  std::size_t vuong_calls = 0;
};

/// Seeded shuffle then round-robin assignment into k folds whose sizes
/// differ by at most one. Throws DataError when n < k or k < 2.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k,
                                                 std::uint64_t seed);

CvReport stage1_cv(const ScoreSeries& series, ModelKind kind, const FitConfig& cfg,
                   std::size_t k, std::uint64_t seed);

inline constexpr double kSsrFloor = 1e-18;

/// F-test on (u, v) pairs: OLS line (exact) against the mean (reduced).
GofReport f_test_linear(std::span<const std::pair<double, double>> pairs, double alpha = 0.05);

/// Stage II for one fitted model. Never throws for linearization failures;
/// they are reported with applicable = false.
GofReport stage2_gof(const ScoreSeries& series, ModelKind kind, const FitResult& fitted,
                     double alpha = 0.05);

/// Throws DataError ("indistinguishable models") when Var(d) < 1e-18.
VuongReport vuong(std::span<const double> ll_exp, std::span<const double> ll_pow,
                  double alpha = 0.005);

ValidationVerdict run_framework(const ScoreSeries& series, const FrameworkConfig& cfg,
                                StageCounters* counters = nullptr);

/// Mixes a stable hash of the cell identifiers into the master seed.
std::uint64_t derive_cell_seed(std::uint64_t master, const ScoreSeries& series);

}  // namespace scaling
