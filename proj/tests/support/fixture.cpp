// SPDX-License-Identifier: Apache-2.0
#include "support/fixture.hpp"

#include <fstream>
#include <mutex>

#include <gtest/gtest.h>

#include "molgp/smiles.hpp"

namespace molgp::testsupport {

std::filesystem::path data_dir() { return std::filesystem::path(MOLGP_DATA_DIR); }

std::filesystem::path fixture_csv() { return data_dir() / "fixtures" / "synthetic_5k.csv"; }

namespace {

const Dataset& cached_fixture() {
  static const Dataset dataset = load_dataset(fixture_csv(), "score");
  return dataset;
}

}  // namespace

FixtureSlice load_fixture(int count) {
  const Dataset& dataset = cached_fixture();
  const int n = count <= 0 ? static_cast<int>(dataset.records.size())
                           : std::min<int>(count, static_cast<int>(dataset.records.size()));
  FixtureSlice slice;
  slice.smiles.reserve(n);
  slice.targets.resize(n);
  for (int i = 0; i < n; ++i) {
    slice.smiles.push_back(dataset.records[i].smiles);
    slice.targets[i] = dataset.records[i].targets.at("score");
  }
  return slice;
}

std::vector<SparseFingerprint> sparse_fps(const std::vector<std::string>& smiles, int radius) {
  std::vector<SparseFingerprint> fps;
  fps.reserve(smiles.size());
  for (const auto& s : smiles) {
    fps.push_back(morgan_sparse(parse_smiles(s), radius));
  }
  return fps;
}

std::filesystem::path write_temp_file(const std::string& name, const std::string& content) {
  const std::filesystem::path path = std::filesystem::path(::testing::TempDir()) / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace molgp::testsupport
