#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scaling/data_ingest.hpp"
#include "scaling/robust_fit.hpp"
#include "scaling/validation.hpp"

namespace scaling {

enum class ReportFormat { Markdown, Csv, Json };

ReportFormat parse_report_format(std::string_view text);

struct ReportConfig {
  FrameworkConfig framework;
  double high_loss_threshold = 1.0;
  double ci_level = 0.95;
  std::string input;

  friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

struct ReportDocument {
  std::vector<ValidationVerdict> verdicts;
  ReportFormat format = ReportFormat::Markdown;
  std::string generated_at;
  ReportConfig config;
};

/// Scientific notation with two decimals, e.g. "1.89e-03".
std::string format_loss(double loss);

struct LossCell {
  std::string text;
  bool high = false;  // loss exceeds the highlight threshold
};

LossCell loss_cell(double loss, double threshold);

/// Orders verdicts by (family, dataset, metric, decoding).
void sort_verdicts(std::vector<ValidationVerdict>& verdicts);

std::string render(const ReportDocument& doc);
std::string render_markdown(const ReportDocument& doc);
std::string render_csv(const std::vector<ValidationVerdict>& verdicts, double high_loss_threshold);
nlohmann::json to_json(const ReportDocument& doc);
nlohmann::json to_json(const ValidationVerdict& v, double high_loss_threshold);

ValidationVerdict verdict_from_json(const nlohmann::json& cell);
ReportDocument report_from_json(const nlohmann::json& doc);
/// Inverse of render_csv.
std::vector<ValidationVerdict> verdicts_from_csv(std::string_view text);

/// Fitted curve with a constant-width margin-of-error band.
struct PlotSeries {
  std::string cell_id;
  ModelKind kind = ModelKind::Exponential;
  std::vector<double> grid;
  std::vector<double> curve;
  std::vector<double> band_lo;
  std::vector<double> band_hi;
  std::vector<Observation> points;
  double moe = 0.0;
  bool moe_available = false;
  double level = 0.95;
};

/// MOE = t_{(1+level)/2, n-3} * sqrt(SSR / (n - 3)), applied around the
/// fitted curve on a log-spaced grid over [lo, hi]. With n <= 3 the band is
/// undefined: the curve is emitted with moe_available = false.
PlotSeries moe_band(const ScoreSeries& series, const FitResult& fit, double level,
                    std::size_t grid_n, double lo, double hi);

/// Columns cell_id,kind,x,y_fit,y_lo,y_hi (band columns empty without a MOE).
std::string render_plot_csv(const std::vector<PlotSeries>& plots);
/// Columns cell_id,x,y_obs.
std::string render_observations_csv(const std::vector<ScoreSeries>& series);

}  // namespace scaling
