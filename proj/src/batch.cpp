#include "scaling/batch.hpp"

#include <omp.h>

#include "scaling/errors.hpp"

namespace scaling {

namespace {

CellOutcome validate_one(const ScoreSeries& series, const FrameworkConfig& cfg,
                         StageCounters* counters) {
  CellOutcome out;
  try {
    out.verdict = run_framework(series, cell_config(cfg, series), counters);
  } catch (const Error& e) {
    out.error = series.cell_id() + ": " + e.what();
  }
  return out;
}

CellFits fit_one(const ScoreSeries& series, const FrameworkConfig& cfg) {
  const FrameworkConfig local = cell_config(cfg, series);
  CellFits out;
  try {
    out.exponential = fit(series, ModelKind::Exponential, local.fit);
  } catch (const Error& e) {
    out.exponential_error = e.what();
  }
  try {
    out.power_law = fit(series, ModelKind::PowerLaw, local.fit);
  } catch (const Error& e) {
    out.power_law_error = e.what();
  }
  return out;
}

}  // namespace

FrameworkConfig cell_config(const FrameworkConfig& cfg, const ScoreSeries& series) {
  FrameworkConfig local = cfg;
  local.seed = derive_cell_seed(cfg.seed, series);
  local.fit.seed = local.seed;
  return local;
}

std::vector<CellOutcome> validate_cells_serial(const std::vector<ScoreSeries>& cells,
                                               const FrameworkConfig& cfg,
                                               std::vector<StageCounters>* counters) {
  if (counters) counters->assign(cells.size(), {});
  std::vector<CellOutcome> out;
  out.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out.push_back(validate_one(cells[i], cfg, counters ? &(*counters)[i] : nullptr));
  }
  return out;
}

std::vector<CellOutcome> validate_cells_parallel(const std::vector<ScoreSeries>& cells,
                                                 const FrameworkConfig& cfg, int threads,
                                                 std::vector<StageCounters>* counters) {
  if (counters) counters->assign(cells.size(), {});
  std::vector<CellOutcome> out(cells.size());
  const int n = static_cast<int>(cells.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (int i = 0; i < n; ++i) {
    out[i] = validate_one(cells[i], cfg, counters ? &(*counters)[i] : nullptr);
  }
  return out;
}

std::vector<CellFits> fit_cells_serial(const std::vector<ScoreSeries>& cells,
                                       const FrameworkConfig& cfg) {
  std::vector<CellFits> out;
  out.reserve(cells.size());
  for (const auto& s : cells) out.push_back(fit_one(s, cfg));
  return out;
}

std::vector<CellFits> fit_cells_parallel(const std::vector<ScoreSeries>& cells,
                                         const FrameworkConfig& cfg, int threads) {
  std::vector<CellFits> out(cells.size());
  const int n = static_cast<int>(cells.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (int i = 0; i < n; ++i) out[i] = fit_one(cells[i], cfg);
  return out;
}

}  // namespace scaling
