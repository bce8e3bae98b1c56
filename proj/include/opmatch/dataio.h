#pragma once

// CSV datasets and truth files, grid discretization, categorical codebooks,
// and the JSON result document.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opmatch/core.h"
#include "opmatch/metrics.h"

namespace opmatch::io {

// Decimal text -> grid integer at 10^-scale, truncated toward negative infinity.
// Throws ValidationError on text that is not a number.
Coord parse_coord(std::string_view text, int scale);
// Exact inverse for grid values: -12345 at scale 3 -> "-12.345".
std::string format_coord(Coord c, int scale);

// Header `c1,...,cd,count`, then one row per point. Duplicate coordinates are
// summed when merge is set and rejected otherwise. ParseError carries the
// 1-based line; nonpositive counts raise ValidationError.
Dataset read_dataset(std::istream& in, int scale = 0, bool merge = false);
Dataset load_dataset(const std::string& path, int scale = 0, bool merge = false);
void write_dataset(std::ostream& out, const Dataset& ds);
void save_dataset(const std::string& path, const Dataset& ds);

// Snap every coordinate down to 10^-digits (from the dataset's own scale) and
// merge collisions. Identity when digits >= scale.
Dataset discretize(const Dataset& ds, int digits);

// Sorted distinct categories; code = rank.
class Codebook {
 public:
  Codebook() = default;
  explicit Codebook(std::vector<std::string> categories);

  Coord code(const std::string& category) const;  // throws ValidationError if unknown
  const std::string& category(Coord code) const;
  const std::vector<std::string>& categories() const noexcept { return categories_; }

 private:
  std::vector<std::string> categories_;
  std::map<std::string, Coord> codes_;
};

void write_codebook(std::ostream& out, const Codebook& cb);  // `category,code`
Codebook read_codebook(std::istream& in);

struct Ingested {
  Dataset data;
  std::vector<std::optional<Codebook>> codebooks;  // per column; set for categorical ones
};

// Raw record table with a header line: each row is one record, every column a
// coordinate. Columns flagged categorical go through a codebook, the rest are
// decimals at `scale`. Equal rows merge into one point.
Ingested ingest_records(std::istream& in, const std::vector<bool>& categorical, int scale = 0);

// Header `q1..qd,t1..td`: a Q point and its true plaintext. Rows for Q points
// without known truth are simply absent.
void write_truth(std::ostream& out, const Dataset& Q, const Truth& truth);
void save_truth(const std::string& path, const Dataset& Q, const Truth& truth);
Truth read_truth(std::istream& in, const Dataset& Q);
Truth load_truth(const std::string& path, const Dataset& Q);

struct ResultRecord {
  std::string algorithm;
  WeightSpec weight;
  std::optional<std::string> index;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> parameters;
  int scale = 0;
  std::vector<Coords> q_points;
  Assignment assignment;  // aligned with q_points
  Rational objective;
  std::optional<bool> proof_of_optimality;
  std::optional<metrics::MetricsReport> metrics;
  double runtime_seconds = 0;
};

// Key order is fixed and rationals are written exactly, so two runs with the
// same inputs differ only in runtime_seconds.
std::string result_to_json(const ResultRecord& r);
ResultRecord result_from_json(std::string_view text);
std::string metrics_to_json(const metrics::MetricsReport& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace opmatch::io
