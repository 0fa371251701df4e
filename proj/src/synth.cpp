#include "scaling/synth.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <random>

#include "scaling/errors.hpp"

namespace scaling {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

ScoreSeries generate(const SynthSpec& spec) {
  if (!(spec.noise_sigma >= 0.0)) throw DomainError("noise_sigma must be nonnegative");
  if (spec.sizes.empty()) throw DomainError("synthetic spec has no sizes");
  std::vector<double> sizes = spec.sizes;
  std::sort(sizes.begin(), sizes.end());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0.0) || !std::isfinite(sizes[i])) {
      throw DomainError("synthetic sizes must be positive and finite");
    }
    if (i > 0 && sizes[i] == sizes[i - 1]) throw DomainError("synthetic sizes must be distinct");
  }

  ScoreSeries s{spec.family, spec.dataset, spec.metric, spec.decoding, {}};
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (double x : sizes) {
    double y = evaluate(spec.params, x);
    if (spec.noise_sigma > 0.0) y += spec.noise_sigma * noise(rng);
    s.points.push_back({x, y});
  }
  return s;
}

std::vector<double> pythia_sizes() { return {0.07, 0.16, 0.41, 1.0, 1.4, 2.8, 6.9, 12.0}; }

std::vector<double> opt_sizes() { return {0.13, 0.35, 1.3, 2.7, 6.7, 13.0}; }

std::vector<double> bloom_sizes() { return {0.00056, 1.1, 1.7, 3.0, 7.0}; }

std::vector<double> log_spaced_sizes(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw DomainError("log_spaced_sizes needs 0 < lo < hi and n >= 2");
  }
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

void write_series_csv(std::ostream& out, const std::vector<ScoreSeries>& series) {
  out << "family,dataset,metric,decoding,size,score,score_kind\n";
  std::array<char, 64> buf{};
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), p.inconsistency);
      out << csv_field(s.family) << ',' << csv_field(s.dataset) << ',' << csv_field(s.metric)
          << ',' << csv_field(s.decoding) << ',' << canonical_size_label(p.size_b) << ','
          << std::string_view(buf.data(), ptr - buf.data()) << ",inconsistency\n";
    }
  }
}

}  // namespace scaling
