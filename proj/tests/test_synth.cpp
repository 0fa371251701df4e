#include <doctest.h>

#include <cmath>
#include <sstream>

#include "scaling/data_ingest.hpp"
#include "scaling/errors.hpp"
#include "scaling/synth.hpp"

using namespace scaling;

TEST_CASE("noiseless examples") {
  SynthSpec a;
  a.params = ExpParams{1, 0, 0};
  a.sizes = {1, 2, 3};
  CHECK(generate(a).values() == std::vector<double>{1, 1, 1});

  SynthSpec b;
  b.params = PowerLawParams{1, 1, 0};
  b.sizes = {2, 1};
  const auto s = generate(b);
  CHECK(s.sizes() == std::vector<double>{1, 2});
  CHECK(s.values() == std::vector<double>{1, 2});
}

TEST_CASE("size tables") {
  const auto p = pythia_sizes();
  REQUIRE(p.size() == 8);
  CHECK(p.front() == 0.07);
  CHECK(p.back() == 12.0);
  CHECK(std::is_sorted(p.begin(), p.end()));
  CHECK(std::adjacent_find(p.begin(), p.end()) == p.end());
  CHECK(opt_sizes().size() == 6);
  CHECK(bloom_sizes().front() == doctest::Approx(0.00056));
  const auto l = log_spaced_sizes(0.07, 12, 40);
  CHECK(l.size() == 40);
  CHECK(l.front() == 0.07);
  CHECK(l.back() == 12.0);
  for (std::size_t i = 2; i < l.size(); ++i)
    CHECK(std::log(l[i] / l[i - 1]) == doctest::Approx(std::log(l[1] / l[0])).epsilon(1e-12));
}

TEST_CASE("generation is seeded") {
  SynthSpec s;
  s.params = ExpParams{0.8, -1.2, 0.05};
  s.sizes = pythia_sizes();
  s.noise_sigma = 0.01;
  s.seed = 5;
  CHECK(generate(s) == generate(s));
  auto t = s;
  t.seed = 6;
  CHECK(generate(s).values() != generate(t).values());
}

TEST_CASE("noise is unbiased") {
  SynthSpec s;
  s.params = PowerLawParams{0.3, -0.7, 0.02};
  s.sizes = {2.0};
  s.noise_sigma = 0.05;
  const double truth = eval_power(std::get<PowerLawParams>(s.params), 2.0);
  double sum = 0;
  const int n = 10000;
  for (int seed = 1; seed <= n; ++seed) {
    s.seed = static_cast<std::uint64_t>(seed);
    sum += generate(s).points[0].inconsistency - truth;
  }
  CHECK(std::abs(sum / n) <= 3 * s.noise_sigma / std::sqrt(double(n)));
}

TEST_CASE("invalid specs") {
  SynthSpec s;
  s.params = PowerLawParams{1, -0.5, 0};
  s.sizes = {1, 1};
  CHECK_THROWS_AS(generate(s), DomainError);
  s.sizes = {};
  CHECK_THROWS_AS(generate(s), DomainError);
  s.sizes = {1, 2};
  s.noise_sigma = -1;
  CHECK_THROWS_AS(generate(s), DomainError);
  CHECK_THROWS_AS(log_spaced_sizes(2, 1, 5), DomainError);
}

TEST_CASE("CSV round trip through ingest") {
  std::vector<ScoreSeries> cells;
  for (int i = 0; i < 3; ++i) {
    SynthSpec s;
    s.params = i % 2 ? ModelParams{PowerLawParams{0.3, -0.7, 0.02}} : ModelParams{ExpParams{0.8, -1.2, 0.05}};
    s.sizes = i == 2 ? bloom_sizes() : pythia_sizes();
    s.noise_sigma = 0.01;
    s.seed = i + 1;
    s.dataset = "ds" + std::to_string(i);
    cells.push_back(generate(s));
  }
  std::ostringstream out;
  write_series_csv(out, cells);
  std::istringstream in(out.str());
  const auto back = load_series(in);
  CHECK(back.series == cells);
}
