// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace molgp {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction { kMinimize, kMaximize };

enum class SplitLabel { kTrain, kTest };

struct DataRecord {
  std::string id;
  std::string smiles;
  std::map<std::string, double> targets;
  std::optional<SplitLabel> split;
};

struct LoadStats {
  int rows_read = 0;
  int dropped_missing_target = 0;
  int dropped_bad_smiles = 0;
  int dropped_malformed_row = 0;
  int split_ids_unmatched = 0;
};

struct Dataset {
  std::vector<DataRecord> records;
  std::string target_name;
  LoadStats stats;

  std::vector<int> indices_with_split(SplitLabel label) const;
};

// Loads a delimited table (tab or comma, sniffed from the header line).
// Required columns: a SMILES column (named "smiles", case-insensitive) and
// the requested target. The record id comes from a column named id /
// record_id / inchikey / name / compound_id when present, otherwise from the
// first column; as a last resort ids are synthesized as row numbers. Records
// with a missing or non-finite target, or with SMILES that fail to parse,
// are dropped and counted in the stats.
Dataset load_dataset(const std::filesystem::path& path, const std::string& target_name);

// Plain SMILES input for commands that need no target: either a table with a
// smiles column, or a bare list with one SMILES (optionally followed by an
// id) per line.
Dataset load_smiles_table(const std::filesystem::path& path);

// Split file: two delimited columns (record_id, train|test). A first line
// whose second field is neither label is treated as a header and skipped.
// Records absent from the split file are excluded; split ids that match no
// record are counted as warnings.
Dataset apply_split(const Dataset& dataset, const std::filesystem::path& split_path);

// Uniform sample of n indices without replacement, in sampled order,
// deterministic for a given seed (pinned xoshiro256** generator).
std::vector<int> subsample(std::span<const int> indices, int n, std::uint64_t seed);

// Indices of the worst ceil(fraction * n) values in the optimization
// direction (for minimization the worst values are the largest), ties broken
// by ascending index. Returned in ascending index order.
std::vector<int> bottom_fraction(std::span<const double> values, double fraction, Direction direction);

}  // namespace molgp
