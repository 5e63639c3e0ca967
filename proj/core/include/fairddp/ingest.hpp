#pragma once
// Tabular CSV ingestion: parse, encode to a Dataset, standardize with
// train-only statistics, and produce seeded three-way splits.
//
// CSV dialect: comma delimiter, '.' decimal point, header row required,
// double-quoted fields with "" escapes.  Unquoted cells are trimmed of
// surrounding whitespace (real-world exports pad after the comma).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairddp/types.hpp"

namespace fairddp {

// Parsed table.  `dropped` counts data rows discarded at parse time
// (wrong field count, unterminated quote).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t dropped = 0;

  // Throws std::invalid_argument naming the column when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(std::istream& in);
CsvTable parse_csv_file(const std::string& path);  // throws if unreadable

struct IngestSpec {
  std::string path;
  std::string label_column;
  std::string positive_label;       // y = 1 iff label cell equals this
  std::string group_column;
  std::string privileged_value;     // a = 1 iff group cell equals this
  std::vector<std::string> feature_columns;
  double train_frac = 0.7;
  double val_frac = 0.3;
  std::string test_path;            // optional separate test file
  std::uint64_t seed = 0;

  // Fractions in (0,1) with train + val <= 1; nonempty feature list.
  void validate() const;
};

struct IngestResult {
  Dataset data;
  std::size_t dropped = 0;  // parse-time + encode-time drops combined
};

// Encode a parsed table: label via positive_label, protected attribute via
// privileged_value, features as reals.  Rows with unparseable declared
// fields are dropped and counted.  The protected column must take exactly
// two distinct values over the usable rows, one of them privileged_value;
// anything else is an error, never a silent collapse.
IngestResult encode_table(const CsvTable& table, const IngestSpec& spec);

// parse_csv_file + encode_table on spec.path.
IngestResult load_csv(const IngestSpec& spec);

// Train-statistics z-scoring.  Columns with zero sample variance pass
// through unscaled; their indices land in `constant_columns` so the
// caller can warn.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> sd;  // forced to 1 for constant columns
  std::vector<std::size_t> constant_columns;

  Dataset apply(const Dataset& d) const;
};

// Mean and sample standard deviation (n - 1) per feature of `train`.
Standardizer fit_standardizer(const Dataset& train);

struct ThreeWaySplit {
  Dataset train, val, test;
};

// Seeded shuffle then contiguous slices of sizes floor(train_frac * n),
// floor(val_frac * n), remainder.  Deterministic per seed.
ThreeWaySplit split_dataset(const Dataset& data, double train_frac, double val_frac,
                            std::uint64_t seed);

// Rank candidate columns by |point-biserial correlation| with the binary
// label and return the top k names (ties broken by header order).  Rows
// where either the label or the candidate cell fails to parse are skipped
// for that candidate; constant columns rank last.
std::vector<std::string> select_features_by_correlation(
    const CsvTable& table, const std::string& label_column,
    const std::string& positive_label, const std::vector<std::string>& candidates,
    std::size_t k);

// Write a Dataset in the schema load_csv reads back: feature columns,
// then the group column ("0"/"1", privileged "1"), then the label column
// ("0"/"1", positive "1").  Features at max_digits10, so a re-ingest
// reproduces the samples bit for bit.
void write_csv(const Dataset& d, std::ostream& out,
               const std::vector<std::string>& feature_names,
               const std::string& group_column, const std::string& label_column);

}  // namespace fairddp
