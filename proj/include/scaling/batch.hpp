#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scaling/data_ingest.hpp"
#include "scaling/robust_fit.hpp"
#include "scaling/validation.hpp"

namespace scaling {

struct CellOutcome {
  std::optional<ValidationVerdict> verdict;
  std::string error;  // precondition failure for this cell
};

/// The configuration a cell is validated with: the master seed is replaced by
/// derive_cell_seed for both fold assignment and fit jitter.
FrameworkConfig cell_config(const FrameworkConfig& cfg, const ScoreSeries& series);

// Serial reference and OpenMP kernels over independent cells. Both produce
// identical results for any thread count; `threads` <= 0 keeps the OpenMP
// default. `counters`, when given, is resized to one entry per cell.
std::vector<CellOutcome> validate_cells_serial(const std::vector<ScoreSeries>& cells,
                                               const FrameworkConfig& cfg,
                                               std::vector<StageCounters>* counters = nullptr);
std::vector<CellOutcome> validate_cells_parallel(const std::vector<ScoreSeries>& cells,
                                                 const FrameworkConfig& cfg, int threads = 0,
                                                 std::vector<StageCounters>* counters = nullptr);

struct CellFits {
  std::optional<FitResult> exponential;
  std::optional<FitResult> power_law;
  std::string exponential_error;
  std::string power_law_error;
};

std::vector<CellFits> fit_cells_serial(const std::vector<ScoreSeries>& cells,
                                       const FrameworkConfig& cfg);
std::vector<CellFits> fit_cells_parallel(const std::vector<ScoreSeries>& cells,
                                         const FrameworkConfig& cfg, int threads = 0);

}  // namespace scaling
