#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "scaling/data_ingest.hpp"
#include "scaling/scaling_models.hpp"

namespace scaling {

/// Ground truth for a synthetic cell: y_i = model(x_i) + N(0, noise_sigma^2).
struct SynthSpec {
  ModelParams params;
  std::vector<double> sizes;  // billions, > 0
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  std::string family = "synthetic";
  std::string dataset = "synthetic";
  std::string metric = "synthetic";
  std::string decoding = "none";
};

/// Deterministic per seed. Sizes are sorted; duplicates are rejected.
/// Throws DomainError for invalid specs or a model pole.
ScoreSeries generate(const SynthSpec& spec);

std::vector<double> pythia_sizes();  // 70M .. 12B
std::vector<double> opt_sizes();     // 130M .. 13B
std::vector<double> bloom_sizes();   // as listed, first entry 0.56M
/// n log-spaced sizes with exact endpoints lo and hi.
std::vector<double> log_spaced_sizes(double lo, double hi, std::size_t n);

/// Writes series in the ingest CSV format (score_kind = inconsistency), with
/// canonical size labels and shortest round-trip scores.
void write_series_csv(std::ostream& out, const std::vector<ScoreSeries>& series);

}  // namespace scaling
