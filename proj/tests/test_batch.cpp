#include <doctest.h>

#include "scaling/batch.hpp"
#include "scaling/synth.hpp"

using namespace scaling;

namespace {

std::vector<ScoreSeries> cells() {
  std::vector<ScoreSeries> out;
  for (int i = 0; i < 12; ++i) {
    SynthSpec s;
    s.params = i % 2 ? ModelParams{PowerLawParams{0.3, -0.7, 0.02}} : ModelParams{ExpParams{0.8, -1.2, 0.05}};
    s.sizes = i % 3 ? pythia_sizes() : opt_sizes();
    s.noise_sigma = 0.005 * (1 + i % 4);
    s.seed = i + 1;
    s.dataset = "ds" + std::to_string(i);
    out.push_back(generate(s));
  }
  // a cell that cannot be cross-validated
  out.push_back(ScoreSeries{"x", "tiny", "m", "g", {{1, 0.5}, {2, 0.4}, {3, 0.35}}});
  return out;
}

}  // namespace

TEST_CASE("parallel validation matches the serial reference") {
  const auto in = cells();
  std::vector<StageCounters> cs;
  const auto serial = validate_cells_serial(in, FrameworkConfig{}, &cs);
  REQUIRE(serial.size() == in.size());
  CHECK(cs.size() == in.size());
  CHECK_FALSE(serial.back().verdict.has_value());
  CHECK_FALSE(serial.back().error.empty());
  for (int threads : {1, 2, 4}) {
    std::vector<StageCounters> cp;
    const auto par = validate_cells_parallel(in, FrameworkConfig{}, threads, &cp);
    REQUIRE(par.size() == serial.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].verdict == serial[i].verdict);
      CHECK(par[i].error == serial[i].error);
      CHECK(cp[i].vuong_calls == cs[i].vuong_calls);
    }
  }
}

TEST_CASE("parallel fits match the serial reference") {
  const auto in = cells();
  const auto serial = fit_cells_serial(in, FrameworkConfig{});
  const auto par = fit_cells_parallel(in, FrameworkConfig{}, 3);
  REQUIRE(par.size() == serial.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    REQUIRE(par[i].exponential.has_value() == serial[i].exponential.has_value());
    if (par[i].exponential) {
      CHECK(to_vector(par[i].exponential->params) == to_vector(serial[i].exponential->params));
      CHECK(par[i].exponential->residuals == serial[i].exponential->residuals);
    }
    REQUIRE(par[i].power_law.has_value() == serial[i].power_law.has_value());
    if (par[i].power_law)
      CHECK(to_vector(par[i].power_law->params) == to_vector(serial[i].power_law->params));
  }
}

TEST_CASE("cell config derives per-cell seeds") {
  const auto in = cells();
  const FrameworkConfig base;
  const auto a = cell_config(base, in[0]);
  const auto b = cell_config(base, in[1]);
  CHECK(a.seed == derive_cell_seed(base.seed, in[0]));
  CHECK(a.fit.seed == a.seed);
  CHECK(a.seed != b.seed);
}
