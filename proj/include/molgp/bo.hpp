// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "molgp/dataset.hpp"
#include "molgp/gp.hpp"

namespace molgp {

struct BoConfig {
  int init_size = 1000;
  int budget = 1000;
  double init_percentile = 0.8;  // initial picks come from this worst fraction
  Direction direction = Direction::kMinimize;
  bool refit_hyperparams = false;
  std::uint64_t seed = 0;
};

struct Acquisition {
  int iteration = 0;   // 1-based
  int pool_index = 0;
  double observed_value = 0.0;
};

struct BoTrajectory {
  std::vector<int> initial_indices;
  std::vector<Acquisition> acquired;
  std::vector<double> best_curve;  // best observed value after each iteration
  double auc = 0.0;
};

// Closed-form expected improvement. For minimization, with s = sqrt(variance)
// and z = (best - mean) / s: EI = (best - mean) * Phi(z) + s * phi(z); the
// s = 0 case degenerates to max(best - mean, 0). Maximization mirrors the
// improvement to mean - best. Throws on negative variance.
double expected_improvement(double mean, double variance, double best, Direction direction);

// Iteration-averaged best-so-far value, normalized to [0, 1] by the pool
// extremes: (value - pool_worst) / (pool_best - pool_worst). Throws when the
// pool range is degenerate or the curve is empty.
double auc_best_observed(std::span<const double> best_curve, double pool_best, double pool_worst);

// Observation hook for testing: called once per iteration with the candidate
// pool indices and their posterior means/variances before acquisition.
using BoInspector = std::function<void(int iteration, const std::vector<int>& candidates,
                                       const Eigen::VectorXd& means,
                                       const Eigen::VectorXd& variances)>;

// Pool-based BO with an expected-improvement acquisition over a fixed
// candidate set. The seeded initial design is drawn uniformly from the worst
// init_percentile of the pool; each iteration refits the GP on the observed
// data (hyperparameters fixed unless refit_hyperparams is set), scores every
// unobserved candidate and acquires the EI argmax, ties broken by lowest pool
// index. Tanimoto values against the pool are cached per observed point and
// the Cholesky factor is extended incrementally.
template <typename Fp>
BoTrajectory run_bo(std::span<const Fp> pool_fps, const Eigen::VectorXd& pool_values,
                    const BoConfig& cfg, const GpHyperparams& hyper,
                    const BoInspector& inspect = {});

extern template BoTrajectory run_bo<SparseFingerprint>(std::span<const SparseFingerprint>,
                                                       const Eigen::VectorXd&, const BoConfig&,
                                                       const GpHyperparams&, const BoInspector&);
extern template BoTrajectory run_bo<DenseFingerprint>(std::span<const DenseFingerprint>,
                                                      const Eigen::VectorXd&, const BoConfig&,
                                                      const GpHyperparams&, const BoInspector&);

}  // namespace molgp
