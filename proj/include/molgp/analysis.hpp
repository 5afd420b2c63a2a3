// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "molgp/fingerprint.hpp"
#include "molgp/molgraph.hpp"

namespace molgp {

struct CollisionReport {
  int dim = 0;
  double mean_pairwise_collisions = 0.0;
  double mean_exact_tanimoto = 0.0;
  double mean_folded_tanimoto = 0.0;
  double mean_overestimation = 0.0;  // folded mean minus exact mean
  std::int64_t pair_count = 0;
};

// Per-pair detail row, one per (pair, dim), for external scatter plotting.
struct PairObservation {
  int pair_index = 0;
  int dim = 0;
  std::int64_t collisions = 0;
  double exact_tanimoto = 0.0;
  double folded_tanimoto = 0.0;
};

// Number of unordered pairs of distinct identifiers, drawn from the union of
// identifiers present in either fingerprint, that fold to the same slot.
std::int64_t pairwise_collisions(const SparseFingerprint& a, const SparseFingerprint& b, int dim);

using MoleculePair = std::pair<const MolGraph*, const MolGraph*>;

// Averages collisions, exact Tanimoto, folded Tanimoto and their difference
// over all pairs, one report per dim. Pass `per_pair` to also collect the
// per-pair rows.
std::vector<CollisionReport> collision_study(std::span<const MoleculePair> pairs,
                                             std::span<const int> dims, int radius,
                                             std::vector<PairObservation>* per_pair = nullptr);

struct RegressionMetrics {
  double r2 = 0.0;
  double mse = 0.0;
  double mae = 0.0;
};

// R^2 uses population variance about the mean of y_true; throws for length
// mismatch, fewer than two points, or constant y_true.
RegressionMetrics regression_metrics(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

}  // namespace molgp
