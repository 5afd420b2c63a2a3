// SPDX-License-Identifier: Apache-2.0
#include "molgp/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "molgp/rng.hpp"
#include "molgp/smiles.hpp"

namespace molgp {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delim)) {
    fields.push_back(trim(field));
  }
  if (!line.empty() && line.back() == delim) {
    fields.emplace_back();
  }
  return fields;
}

char sniff_delimiter(const std::string& header) {
  return header.find('\t') != std::string::npos ? '\t' : ',';
}

std::optional<double> parse_finite(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) {
    return std::nullopt;
  }
  const std::string lower = to_lower(t);
  if (lower == "na" || lower == "nan" || lower == "null" || lower == "none") {
    return std::nullopt;
  }
  char* end = nullptr;
  const double value = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

int find_id_column(const std::vector<std::string>& columns, int smiles_col, int target_col) {
  static const std::set<std::string> id_names = {"id", "record_id", "inchikey", "name",
                                                 "compound_id"};
  for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
    if (id_names.count(to_lower(columns[i]))) {
      return i;
    }
  }
  if (smiles_col != 0 && target_col != 0) {
    return 0;
  }
  return -1;
}

}  // namespace

std::vector<int> Dataset::indices_with_split(SplitLabel label) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(records.size()); ++i) {
    if (records[i].split == label) {
      out.push_back(i);
    }
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, const std::string& target_name) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open dataset file: " + path.string());
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw DataError("dataset file is empty: " + path.string());
  }
  const char delim = sniff_delimiter(header);
  const std::vector<std::string> columns = split_line(header, delim);

  int smiles_col = -1;
  int target_col = -1;
  for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
    if (to_lower(columns[i]) == "smiles") {
      smiles_col = i;
    }
    if (columns[i] == target_name) {
      target_col = i;
    }
  }
  if (target_col < 0) {  // case-insensitive fallback
    for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
      if (to_lower(columns[i]) == to_lower(target_name)) {
        target_col = i;
      }
    }
  }
  if (smiles_col < 0) {
    throw DataError("no SMILES column in " + path.string() + "; available columns: " +
                    joined(columns));
  }
  if (target_col < 0) {
    throw DataError("target column '" + target_name + "' not found in " + path.string() +
                    "; available columns: " + joined(columns));
  }
  const int id_col = find_id_column(columns, smiles_col, target_col);

  Dataset dataset;
  dataset.target_name = target_name;
  std::set<std::string> seen_ids;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      continue;
    }
    ++row;
    ++dataset.stats.rows_read;
    const std::vector<std::string> fields = split_line(line, delim);
    if (static_cast<int>(fields.size()) != static_cast<int>(columns.size())) {
      ++dataset.stats.dropped_malformed_row;
      continue;
    }
    const std::optional<double> target = parse_finite(fields[target_col]);
    if (!target) {
      ++dataset.stats.dropped_missing_target;
      continue;
    }
    const std::string& smiles = fields[smiles_col];
    try {
      parse_smiles(smiles);
    } catch (const SmilesError&) {
      ++dataset.stats.dropped_bad_smiles;
      continue;
    }
    DataRecord record;
    record.id = id_col >= 0 ? fields[id_col] : "row" + std::to_string(row);
    record.smiles = smiles;
    record.targets[target_name] = *target;
    if (!seen_ids.insert(record.id).second) {
      throw DataError("duplicate record id '" + record.id + "' in " + path.string());
    }
    dataset.records.push_back(std::move(record));
  }
  if (dataset.records.empty()) {
    throw DataError("zero usable records in " + path.string());
  }
  return dataset;
}

Dataset load_smiles_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open input file: " + path.string());
  }
  std::string first;
  if (!std::getline(in, first)) {
    throw DataError("input file is empty: " + path.string());
  }

  const char delim = sniff_delimiter(first);
  const std::vector<std::string> columns = split_line(first, delim);
  int smiles_col = -1;
  for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
    if (to_lower(columns[i]) == "smiles") {
      smiles_col = i;
    }
  }

  Dataset dataset;
  std::set<std::string> seen_ids;
  int row = 0;
  auto consume = [&](const std::string& line) {
    if (trim(line).empty()) {
      return;
    }
    ++row;
    ++dataset.stats.rows_read;
    std::string smiles;
    std::string id;
    if (smiles_col >= 0) {
      const std::vector<std::string> fields = split_line(line, delim);
      if (static_cast<int>(fields.size()) != static_cast<int>(columns.size())) {
        ++dataset.stats.dropped_malformed_row;
        return;
      }
      smiles = fields[smiles_col];
      const int id_col = find_id_column(columns, smiles_col, smiles_col);
      id = id_col >= 0 ? fields[id_col] : "row" + std::to_string(row);
    } else {
      // bare list: SMILES, optionally followed by whitespace and an id
      std::istringstream fields(line);
      fields >> smiles;
      fields >> id;
      if (id.empty()) {
        id = "row" + std::to_string(row);
      }
    }
    try {
      parse_smiles(smiles);
    } catch (const SmilesError&) {
      ++dataset.stats.dropped_bad_smiles;
      return;
    }
    if (!seen_ids.insert(id).second) {
      id += "#" + std::to_string(row);
      seen_ids.insert(id);
    }
    dataset.records.push_back(DataRecord{id, smiles, {}, std::nullopt});
  };

  if (smiles_col < 0) {
    consume(first);  // headerless list: the first line is already data
  }
  std::string line;
  while (std::getline(in, line)) {
    consume(line);
  }
  if (dataset.records.empty()) {
    throw DataError("zero usable records in " + path.string());
  }
  return dataset;
}

Dataset apply_split(const Dataset& dataset, const std::filesystem::path& split_path) {
  std::ifstream in(split_path);
  if (!in) {
    throw DataError("cannot open split file: " + split_path.string());
  }
  std::map<std::string, SplitLabel> labels;
  std::string line;
  bool first_line = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      continue;
    }
    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    const std::vector<std::string> fields = split_line(line, delim);
    if (fields.size() != 2) {
      throw DataError("malformed split file line: '" + line + "'");
    }
    const std::string label = to_lower(fields[1]);
    if (label != "train" && label != "test") {
      if (first_line) {
        first_line = false;
        continue;  // header
      }
      throw DataError("split label must be train or test, got '" + fields[1] + "'");
    }
    first_line = false;
    labels[fields[0]] = label == "train" ? SplitLabel::kTrain : SplitLabel::kTest;
  }

  Dataset out;
  out.target_name = dataset.target_name;
  out.stats = dataset.stats;
  for (const DataRecord& record : dataset.records) {
    auto it = labels.find(record.id);
    if (it == labels.end()) {
      continue;  // excluded
    }
    DataRecord labelled = record;
    labelled.split = it->second;
    out.records.push_back(std::move(labelled));
    labels.erase(it);
  }
  out.stats.split_ids_unmatched += static_cast<int>(labels.size());
  return out;
}

std::vector<int> subsample(std::span<const int> indices, int n, std::uint64_t seed) {
  if (n < 0 || static_cast<std::size_t>(n) > indices.size()) {
    throw std::invalid_argument("subsample size exceeds index count");
  }
  std::vector<int> pool(indices.begin(), indices.end());
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t j =
        static_cast<std::uint64_t>(i) + rng.below(pool.size() - static_cast<std::uint64_t>(i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

std::vector<int> bottom_fraction(std::span<const double> values, double fraction,
                                 Direction direction) {
  if (values.empty()) {
    throw std::invalid_argument("bottom_fraction needs at least one value");
  }
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw std::invalid_argument("fraction must be in (0, 1]");
  }
  const int n = static_cast<int>(values.size());
  const int keep = static_cast<int>(std::ceil(fraction * n));

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    const double a = values[lhs];
    const double b = values[rhs];
    if (a != b) {
      // worst first: for minimization the largest values are worst
      return direction == Direction::kMinimize ? a > b : a < b;
    }
    return lhs < rhs;
  });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace molgp
