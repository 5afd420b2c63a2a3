// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "molgp/dataset.hpp"
#include "molgp/fingerprint.hpp"

namespace molgp::testsupport {

std::filesystem::path data_dir();
std::filesystem::path fixture_csv();

struct FixtureSlice {
  std::vector<std::string> smiles;
  Eigen::VectorXd targets;
};

// First `count` fixture records (count <= 0 loads everything). The fixture
// is cached process-wide, so repeated slices are cheap.
FixtureSlice load_fixture(int count = -1);

std::vector<SparseFingerprint> sparse_fps(const std::vector<std::string>& smiles, int radius = 2);

// Writes `content` to a fresh file under the test temp directory.
std::filesystem::path write_temp_file(const std::string& name, const std::string& content);

}  // namespace molgp::testsupport
