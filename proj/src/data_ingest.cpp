#include "scaling/data_ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <tuple>

#include "scaling/errors.hpp"

namespace scaling {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Shortest round-trip digits, never in exponent form (the size grammar has none).
std::string shortest(double v) {
  std::array<char, 400> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
  return std::string(buf.data(), ptr);
}

using CellKey = std::tuple<std::string, std::string, std::string, std::string>;

}  // namespace

std::vector<double> ScoreSeries::sizes() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.size_b);
  return out;
}

std::vector<double> ScoreSeries::values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.inconsistency);
  return out;
}

std::string ScoreSeries::cell_id() const {
  return family + "/" + dataset + "/" + metric + "/" + decoding;
}

double parse_size(std::string_view label) {
  const std::string_view t = trim(label);
  if (t.empty()) throw ParseError("size label is empty");
  const char unit = static_cast<char>(std::toupper(static_cast<unsigned char>(t.back())));
  if (unit != 'M' && unit != 'B') {
    throw ParseError("size label '" + std::string(label) + "': unknown unit, expected M or B");
  }
  const std::string_view number = trim(t.substr(0, t.size() - 1));
  if (number.empty() || number.front() == '+' ||
      number.find_first_not_of("0123456789.-") != std::string_view::npos) {
    throw ParseError("size label '" + std::string(label) + "': malformed number '" +
                     std::string(number) + "'");
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc() || ptr != number.data() + number.size()) {
    throw ParseError("size label '" + std::string(label) + "': malformed number '" +
                     std::string(number) + "'");
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParseError("size label '" + std::string(label) + "': size must be positive");
  }
  return unit == 'M' ? value / 1000.0 : value;
}

std::string canonical_size_label(double value_b) {
  if (!(value_b > 0.0) || !std::isfinite(value_b)) {
    throw DomainError("size must be positive and finite");
  }
  if (value_b < 1.0) {
    std::string m = shortest(value_b * 1000.0) + "M";
    if (parse_size(m) == value_b) return m;
  }
  return shortest(value_b) + "B";
}

ScoreKind parse_score_kind(std::string_view text) {
  const std::string t = lower(trim(text));
  if (t == "consistency") return ScoreKind::Consistency;
  if (t == "inconsistency") return ScoreKind::Inconsistency;
  throw ParseError("unknown score_kind '" + std::string(text) +
                   "', expected consistency or inconsistency");
}

double to_inconsistency(double score, ScoreKind kind) {
  if (!std::isfinite(score)) throw DataError("score is not finite");
  return kind == ScoreKind::Consistency ? 1.0 - score : score;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

IngestResult load_series(std::istream& in, const IngestOptions& options) {
  static constexpr std::array<std::string_view, 7> kRequired = {
      "family", "dataset", "metric", "decoding", "size", "score", "score_kind"};

  std::string line;
  std::size_t line_no = 0;
  // Skip leading blank lines; the first non-blank line is the header.
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw DataError("input is empty: header row required");

  const auto header = split_csv_line(line);
  std::array<std::size_t, kRequired.size()> col{};
  for (std::size_t r = 0; r < kRequired.size(); ++r) {
    auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) {
      return lower(trim(h)) == kRequired[r];
    });
    if (it == header.end()) {
      throw DataError("missing required column '" + std::string(kRequired[r]) + "'");
    }
    col[r] = static_cast<std::size_t>(it - header.begin());
  }
  const std::size_t needed = *std::max_element(col.begin(), col.end()) + 1;

  IngestResult result;
  // cell -> size -> scores
  std::map<CellKey, std::map<double, std::vector<double>>> cells;
  std::vector<std::string> row_errors;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++result.rows;
    const auto fields = split_csv_line(line);
    if (fields.size() < needed) {
      row_errors.push_back("row " + std::to_string(line_no) + ": expected at least " +
                           std::to_string(needed) + " fields, got " +
                           std::to_string(fields.size()));
      continue;
    }
    try {
      const double size = parse_size(fields[col[4]]);
      const std::string_view score_text = trim(fields[col[5]]);
      double score = 0.0;
      auto [ptr, ec] =
          std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
      if (ec != std::errc() || ptr != score_text.data() + score_text.size()) {
        throw ParseError("score '" + std::string(score_text) + "' is not a number");
      }
      const ScoreKind kind = parse_score_kind(fields[col[6]]);
      const double y = to_inconsistency(score, kind);
      if (kind == ScoreKind::Inconsistency && (y < 0.0 || y > 1.0)) {
        result.warnings.push_back("row " + std::to_string(line_no) + ": inconsistency " +
                                  std::string(score_text) + " lies outside [0,1]");
      }
      CellKey key{std::string(trim(fields[col[0]])), std::string(trim(fields[col[1]])),
                  std::string(trim(fields[col[2]])), std::string(trim(fields[col[3]]))};
      cells[std::move(key)][size].push_back(y);
    } catch (const Error& e) {
      row_errors.push_back("row " + std::to_string(line_no) + ": " + e.what());
    }
  }

  if (!row_errors.empty()) {
    std::string msg = "ingest failed:";
    for (const auto& e : row_errors) msg += "\n  " + e;
    throw DataError(msg);
  }
  if (result.rows == 0) throw DataError("input has a header but no data rows");

  for (auto& [key, by_size] : cells) {
    ScoreSeries s;
    std::tie(s.family, s.dataset, s.metric, s.decoding) = key;
    for (auto& [size, scores] : by_size) {
      // Sorted summation keeps the mean independent of input row order.
      std::sort(scores.begin(), scores.end());
      double sum = 0.0;
      for (double v : scores) sum += v;
      s.points.push_back({size, sum / static_cast<double>(scores.size())});
    }
    if (s.points.size() < options.min_points) {
      result.skipped.push_back({s.cell_id(), s.points.size(),
                                "needs at least " + std::to_string(options.min_points) +
                                    " distinct sizes"});
      continue;
    }
    result.series.push_back(std::move(s));
  }
  return result;
}

IngestResult load_series(const std::string& path, const IngestOptions& options) {
  if (path == "-") return load_series(std::cin, options);
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  return load_series(in, options);
}

}  // namespace scaling
