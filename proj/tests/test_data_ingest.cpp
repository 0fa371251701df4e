#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "scaling/data_ingest.hpp"
#include "scaling/errors.hpp"

using namespace scaling;

namespace {

const char* kHeader = "family,dataset,metric,decoding,size,score,score_kind\n";

IngestResult ingest(const std::string& body) {
  std::istringstream in(std::string(kHeader) + body);
  return load_series(in);
}

}  // namespace

TEST_CASE("parse_size handles the M/B grammar") {
  CHECK(parse_size("12B") == 12.0);
  CHECK(parse_size("70M") == doctest::Approx(0.07).epsilon(1e-15));
  CHECK(parse_size("0.56M") == doctest::Approx(0.00056).epsilon(1e-15));
  CHECK(parse_size(" 1.4b ") == doctest::Approx(1.4));
  CHECK(parse_size("410m") == doctest::Approx(0.41));
}

TEST_CASE("parse_size rejects malformed labels") {
  for (const char* bad : {"", "12", "12K", "B", "-1B", "0M", "1.2.3B", "abcM", "nanB", "1e400B"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_size(bad), ParseError);
  }
  try {
    parse_size("12K");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("12K") != std::string::npos);
  }
}

TEST_CASE("canonical labels round-trip through parse_size") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> logu(std::log(1e-6), std::log(1e4));
  for (int i = 0; i < 2000; ++i) {
    const double v = std::exp(logu(rng));
    CHECK(parse_size(canonical_size_label(v)) == v);
  }
  CHECK(canonical_size_label(0.07) == "70M");
  CHECK(canonical_size_label(12.0) == "12B");
  CHECK(canonical_size_label(1.4) == "1.4B");
}

TEST_CASE("to_inconsistency") {
  CHECK(to_inconsistency(0.9, ScoreKind::Consistency) == doctest::Approx(0.1));
  CHECK(to_inconsistency(0.0, ScoreKind::Consistency) == 1.0);
  CHECK(to_inconsistency(0.25, ScoreKind::Inconsistency) == 0.25);
  CHECK_THROWS_AS(to_inconsistency(NAN, ScoreKind::Consistency), DataError);
  CHECK_THROWS_AS(to_inconsistency(INFINITY, ScoreKind::Inconsistency), DataError);
}

TEST_CASE("an 8-row Pythia file becomes one 8-point series") {
  const char* sizes[] = {"70M", "160M", "410M", "1B", "1.4B", "2.8B", "6.9B", "12B"};
  const double scores[] = {0.61, 0.64, 0.68, 0.70, 0.72, 0.75, 0.78, 0.80};
  std::string body;
  for (int i = 0; i < 8; ++i) {
    body += std::string("Pythia,DART,AlignScore,greedy,") + sizes[i] + "," +
            std::to_string(scores[i]) + ",consistency\n";
  }
  const auto r = ingest(body);
  REQUIRE(r.series.size() == 1);
  CHECK(r.rows == 8);
  const auto& s = r.series[0];
  CHECK(s.cell_id() == "Pythia/DART/AlignScore/greedy");
  REQUIRE(s.points.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(s.points[i].size_b == parse_size(sizes[i]));
    CHECK(s.points[i].inconsistency == doctest::Approx(1.0 - scores[i]).epsilon(1e-15));
  }
}

TEST_CASE("duplicate sizes are averaged") {
  const auto r = ingest(
      "P,D,M,g,1B,0.2,inconsistency\n"
      "P,D,M,g,1B,0.4,inconsistency\n"
      "P,D,M,g,2B,0.1,inconsistency\n"
      "P,D,M,g,3B,0.1,inconsistency\n");
  REQUIRE(r.series.size() == 1);
  REQUIRE(r.series[0].points.size() == 3);
  CHECK(r.series[0].points[0].inconsistency == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("cells with fewer than 3 sizes are skipped and reported") {
  const auto r = ingest(
      "P,D,M,g,1B,0.2,inconsistency\n"
      "P,D,M,g,2B,0.4,inconsistency\n");
  CHECK(r.series.empty());
  REQUIRE(r.skipped.size() == 1);
  CHECK(r.skipped[0].cell_id == "P/D/M/g");
  CHECK(r.skipped[0].distinct_sizes == 2);
}

TEST_CASE("ingest errors") {
  SUBCASE("missing column") {
    std::istringstream in("family,dataset,metric,decoding,size,score\nP,D,M,g,1B,0.2\n");
    try {
      load_series(in);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("score_kind") != std::string::npos);
    }
  }
  SUBCASE("bad size names the row") {
    try {
      ingest("P,D,M,g,1B,0.2,inconsistency\nP,D,M,g,7Q,0.2,inconsistency\n");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("7Q") != std::string::npos);
      CHECK(msg.find('3') != std::string::npos);
    }
  }
  SUBCASE("empty file") {
    std::istringstream in("");
    CHECK_THROWS_AS(load_series(in), DataError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_series("/nonexistent/x.csv"), DataError); }
}

TEST_CASE("extra columns and column order do not matter") {
  std::istringstream in(
      "note,score_kind,size,score,family,dataset,metric,decoding,extra\n"
      "a,inconsistency,1B,0.3,P,D,M,g,x\n"
      "b,inconsistency,2B,0.2,P,D,M,g,y\n"
      "\"c, quoted\",inconsistency,3B,0.1,P,D,M,g,z\n");
  const auto r = load_series(in);
  REQUIRE(r.series.size() == 1);
  CHECK(r.series[0].values() == std::vector<double>{0.3, 0.2, 0.1});
}

TEST_CASE("out-of-range inconsistency is accepted with a warning") {
  const auto r = ingest(
      "P,D,M,g,1B,1.3,inconsistency\n"
      "P,D,M,g,2B,0.2,inconsistency\n"
      "P,D,M,g,3B,0.1,inconsistency\n");
  CHECK(r.series.size() == 1);
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("ingest is permutation invariant and conserves rows") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> rows;
  const char* fams[] = {"Pythia", "OPT", "BLOOM"};
  const char* sizes[] = {"70M", "1B", "2.8B", "12B"};
  std::size_t expected_points = 0;
  for (int f = 0; f < 3; ++f) {
    for (int d = 0; d < 3; ++d) {
      const int n_sizes = 1 + (f + d) % 4;
      for (int s = 0; s < n_sizes; ++s) {
        const int dup = 1 + (s % 2);
        for (int k = 0; k < dup; ++k) {
          rows.push_back(std::string(fams[f]) + ",ds" + std::to_string(d) + ",M,g," + sizes[s] +
                         "," + std::to_string(u(rng)) + ",consistency\n");
        }
      }
      expected_points += n_sizes;
    }
  }
  auto join = [&] {
    std::string body;
    for (const auto& r : rows) body += r;
    return body;
  };
  const auto a = ingest(join());
  std::size_t counted = 0;
  for (const auto& s : a.series) counted += s.points.size();
  for (const auto& sk : a.skipped) counted += sk.distinct_sizes;
  CHECK(counted == expected_points);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto b = ingest(join());
    CHECK(a.series == b.series);
  }
}

TEST_CASE("split_csv_line") {
  CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv_line("\"x,y\",\"say \"\"hi\"\"\",") ==
        std::vector<std::string>{"x,y", "say \"hi\"", ""});
}
