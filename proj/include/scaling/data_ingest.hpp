#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace scaling {

/// A model-size label together with its value in billions of parameters.
struct SizeSpec {
  std::string raw;
  double value_b = 0.0;
};

/// One (size, inconsistency) point. Sizes are in billions of parameters.
struct Observation {
  double size_b = 0.0;
  double inconsistency = 0.0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// One analysis cell: the points of a single (family, dataset, metric,
/// decoding) combination, sorted by strictly increasing size.
struct ScoreSeries {
  std::string family;
  std::string dataset;
  std::string metric;
  std::string decoding;
  std::vector<Observation> points;

  std::vector<double> sizes() const;
  std::vector<double> values() const;
  /// "family/dataset/metric/decoding"
  std::string cell_id() const;

  friend bool operator==(const ScoreSeries&, const ScoreSeries&) = default;
};

enum class ScoreKind { Consistency, Inconsistency };

/// Parses labels such as "70M", "1.4B" or " 12 b " into billions.
/// Throws ParseError naming the offending token.
double parse_size(std::string_view label);

/// Shortest label that parse_size maps back to exactly `value_b`.
/// Sub-billion values prefer the M form ("70M") when it round-trips.
std::string canonical_size_label(double value_b);

ScoreKind parse_score_kind(std::string_view text);

/// Consistency z maps to 1 - z; inconsistency passes through.
/// Throws DataError for non-finite scores.
double to_inconsistency(double score, ScoreKind kind);

struct IngestOptions {
  std::size_t min_points = 3;
};

struct SkippedCell {
  std::string cell_id;
  std::size_t distinct_sizes = 0;
  std::string reason;
};

struct IngestResult {
  std::vector<ScoreSeries> series;
  std::vector<SkippedCell> skipped;
  std::vector<std::string> warnings;
  /// Number of data rows read (excluding the header).
  std::size_t rows = 0;
};

/// Reads the score CSV (header required, columns
/// family,dataset,metric,decoding,size,score,score_kind; extra columns are
/// ignored). Rows are grouped into cells, duplicate (cell, size) rows are
/// averaged, and cells with fewer than `min_points` distinct sizes are
/// reported in `skipped`. Output order is sorted by cell identifiers.
IngestResult load_series(std::istream& in, const IngestOptions& options = {});
/// Same as above; "-" reads standard input.
IngestResult load_series(const std::string& path, const IngestOptions& options = {});

/// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace scaling
