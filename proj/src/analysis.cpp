// SPDX-License-Identifier: Apache-2.0
#include "molgp/analysis.hpp"

#include <stdexcept>
#include <unordered_map>

#include "molgp/kernel.hpp"

namespace molgp {

std::int64_t pairwise_collisions(const SparseFingerprint& a, const SparseFingerprint& b,
                                 int dim) {
  if (dim < 1) {
    throw std::invalid_argument("dim must be >= 1");
  }
  // union of distinct identifiers, bucketed by folded slot
  std::unordered_map<std::uint64_t, std::int64_t> slot_sizes;
  auto add = [&](const SparseFingerprint& fp, bool skip_shared) {
    for (const auto& [id, count] : fp.entries()) {
      (void)count;
      if (skip_shared && a.count_of(id) > 0) {
        continue;
      }
      ++slot_sizes[id % static_cast<std::uint64_t>(dim)];
    }
  };
  add(a, false);
  add(b, true);

  std::int64_t collisions = 0;
  for (const auto& [slot, size] : slot_sizes) {
    (void)slot;
    collisions += size * (size - 1) / 2;
  }
  return collisions;
}

std::vector<CollisionReport> collision_study(std::span<const MoleculePair> pairs,
                                             std::span<const int> dims, int radius,
                                             std::vector<PairObservation>* per_pair) {
  if (pairs.empty()) {
    throw std::invalid_argument("collision_study needs at least one pair");
  }
  std::vector<std::pair<SparseFingerprint, SparseFingerprint>> fps;
  fps.reserve(pairs.size());
  std::vector<double> exact;
  exact.reserve(pairs.size());
  for (const auto& [first, second] : pairs) {
    fps.emplace_back(morgan_sparse(*first, radius), morgan_sparse(*second, radius));
    exact.push_back(tanimoto(fps.back().first, fps.back().second));
  }
  double exact_sum = 0.0;
  for (double value : exact) {
    exact_sum += value;
  }
  const double mean_exact = exact_sum / static_cast<double>(pairs.size());

  std::vector<CollisionReport> reports;
  reports.reserve(dims.size());
  for (int dim : dims) {
    CollisionReport report;
    report.dim = dim;
    report.pair_count = static_cast<std::int64_t>(pairs.size());
    double folded_sum = 0.0;
    std::int64_t collision_sum = 0;
    for (std::size_t p = 0; p < fps.size(); ++p) {
      const auto& [fa, fb] = fps[p];
      const double folded = tanimoto(fold(fa, dim), fold(fb, dim));
      const std::int64_t collisions = pairwise_collisions(fa, fb, dim);
      folded_sum += folded;
      collision_sum += collisions;
      if (per_pair) {
        per_pair->push_back(
            PairObservation{static_cast<int>(p), dim, collisions, exact[p], folded});
      }
    }
    report.mean_exact_tanimoto = mean_exact;
    report.mean_folded_tanimoto = folded_sum / static_cast<double>(pairs.size());
    report.mean_pairwise_collisions =
        static_cast<double>(collision_sum) / static_cast<double>(pairs.size());
    report.mean_overestimation = report.mean_folded_tanimoto - report.mean_exact_tanimoto;
    reports.push_back(report);
  }
  return reports;
}

RegressionMetrics regression_metrics(const Eigen::VectorXd& y_true,
                                     const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument("regression_metrics needs equal-length vectors");
  }
  if (y_true.size() < 2) {
    throw std::invalid_argument("regression_metrics needs at least two points");
  }
  const Eigen::ArrayXd residual = (y_true - y_pred).array();
  const double ss_res = residual.square().sum();
  const double mean = y_true.mean();
  const double ss_tot = (y_true.array() - mean).square().sum();
  if (ss_tot == 0.0) {
    throw std::invalid_argument("R^2 is undefined for constant y_true");
  }
  RegressionMetrics metrics;
  metrics.mse = ss_res / static_cast<double>(y_true.size());
  metrics.mae = residual.abs().mean();
  metrics.r2 = 1.0 - ss_res / ss_tot;
  return metrics;
}

}  // namespace molgp
