#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace scaling {

struct NelderMeadOptions {
  std::size_t max_iters = 2000;
  // Converged when the loss spread across the simplex falls below
  // ftol * |best| + fatol, or every vertex lies within xtol (relative) of
  // the best one.
  double ftol = 1e-12;
  double fatol = 1e-30;
  double xtol = 1e-13;
  double step_rel = 0.05;
  double step_abs = 0.00025;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization with standard coefficients
/// (reflect 1, expand 2, contract 1/2, shrink 1/2). After each convergence
/// the simplex is rebuilt around the best vertex and the search resumes
/// until a restart no longer improves the loss or the iteration budget is
/// spent. Non-finite objective values are treated as +inf. The start point
/// is a simplex vertex, so the result is never worse than f(x0).
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace scaling
