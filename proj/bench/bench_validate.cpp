// Serial reference vs OpenMP kernel on a batch of synthetic cells.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <omp.h>

#include "scaling/batch.hpp"
#include "scaling/report.hpp"
#include "scaling/synth.hpp"

using h_clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
  const int n_cells = argc > 1 ? std::atoi(argv[1]) : 64;
  const int threads = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();

  std::vector<scaling::ScoreSeries> cells;
  for (int i = 0; i < n_cells; ++i) {
    scaling::SynthSpec spec;
    if (i % 2 == 0) spec.params = scaling::ExpParams{0.8, -1.2, 0.05};
    else spec.params = scaling::PowerLawParams{0.3, -0.7, 0.02};
    spec.sizes = scaling::log_spaced_sizes(0.07, 12.0, 16);
    spec.noise_sigma = 0.005;
    spec.seed = static_cast<std::uint64_t>(i) + 1;
    spec.dataset = "bench" + std::to_string(i);
    cells.push_back(scaling::generate(spec));
  }
  scaling::FrameworkConfig cfg;

  auto t0 = h_clock::now();
  const auto serial = scaling::validate_cells_serial(cells, cfg);
  auto t1 = h_clock::now();
  const auto parallel = scaling::validate_cells_parallel(cells, cfg, threads);
  auto t2 = h_clock::now();

  bool same = serial.size() == parallel.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i) {
    same = serial[i].verdict == parallel[i].verdict && serial[i].error == parallel[i].error;
  }
  const double ms_serial = std::chrono::duration<double, std::milli>(t1 - t0).count();
  const double ms_parallel = std::chrono::duration<double, std::milli>(t2 - t1).count();
  std::printf("cells %d threads %d\n", n_cells, threads);
  std::printf("serial   %10.1f ms\n", ms_serial);
  std::printf("parallel %10.1f ms  speedup %.2fx\n", ms_parallel, ms_serial / ms_parallel);
  std::printf("results identical: %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
