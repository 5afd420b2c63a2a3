// SPDX-License-Identifier: Apache-2.0
#include "molgp/kernel.hpp"

#include <algorithm>
#include <cstdint>

namespace molgp {

double tanimoto(const SparseFingerprint& a, const SparseFingerprint& b) {
  if (a.empty() && b.empty()) {
    return 0.0;
  }
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::uint64_t min_sum = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].first < eb[j].first) {
      ++i;
    } else if (eb[j].first < ea[i].first) {
      ++j;
    } else {
      min_sum += std::min(ea[i].second, eb[j].second);
      ++i;
      ++j;
    }
  }
  const std::uint64_t max_sum = a.total_count() + b.total_count() - min_sum;
  return static_cast<double>(min_sum) / static_cast<double>(max_sum);
}

double tanimoto(const DenseFingerprint& a, const DenseFingerprint& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("dense fingerprint dim mismatch");
  }
  std::uint64_t min_sum = 0;
  std::uint64_t max_sum = 0;
  for (int i = 0; i < a.dim(); ++i) {
    min_sum += std::min(a.counts[i], b.counts[i]);
    max_sum += std::max(a.counts[i], b.counts[i]);
  }
  if (max_sum == 0) {
    return 0.0;
  }
  return static_cast<double>(min_sum) / static_cast<double>(max_sum);
}

}  // namespace molgp
