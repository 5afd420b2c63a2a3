// SPDX-License-Identifier: Apache-2.0
#include "molgp/bo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "molgp/kernel.hpp"

namespace molgp {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

bool improves(double candidate, double incumbent, Direction direction) {
  return direction == Direction::kMinimize ? candidate < incumbent : candidate > incumbent;
}

}  // namespace

double expected_improvement(double mean, double variance, double best, Direction direction) {
  if (variance < 0.0 || !std::isfinite(variance)) {
    throw std::invalid_argument("expected_improvement needs a finite non-negative variance");
  }
  const double improvement = direction == Direction::kMinimize ? best - mean : mean - best;
  const double sigma = std::sqrt(variance);
  if (sigma == 0.0) {
    return std::max(improvement, 0.0);
  }
  const double z = improvement / sigma;
  return std::max(0.0, improvement * normal_cdf(z) + sigma * normal_pdf(z));
}

double auc_best_observed(std::span<const double> best_curve, double pool_best,
                         double pool_worst) {
  if (best_curve.empty()) {
    throw std::invalid_argument("auc_best_observed needs a non-empty curve");
  }
  if (pool_best == pool_worst) {
    throw std::invalid_argument("degenerate pool range");
  }
  double total = 0.0;
  for (double value : best_curve) {
    total += (value - pool_worst) / (pool_best - pool_worst);
  }
  return total / static_cast<double>(best_curve.size());
}

namespace {

// Incrementally grown lower-triangular factor of the observed-set kernel.
class GrowingCholesky {
 public:
  explicit GrowingCholesky(double jitter) : jitter_(jitter) {}

  int size() const { return n_; }
  double jitter() const { return jitter_; }
  const Eigen::MatrixXd& lower() const { return storage_; }

  // Appends one row/column: `cross` holds k(new, old) for the current rows,
  // `diagonal` is k(new, new). Returns false when the Schur complement is not
  // positive, in which case the caller rebuilds from scratch.
  bool extend(const Eigen::VectorXd& cross, double diagonal) {
    reserve(n_ + 1);
    if (n_ == 0) {
      const double d = diagonal + jitter_;
      if (d <= 0.0) return false;
      storage_(0, 0) = std::sqrt(d);
      n_ = 1;
      return true;
    }
    auto lower_view = storage_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>();
    const Eigen::VectorXd w = lower_view.solve(cross);
    const double remainder = diagonal + jitter_ - w.squaredNorm();
    if (remainder <= 1e-12 * (diagonal + jitter_)) {
      return false;
    }
    storage_.row(n_).head(n_) = w.transpose();
    storage_(n_, n_) = std::sqrt(remainder);
    ++n_;
    return true;
  }

  // Full rebuild via the shared jitter-escalation path.
  void rebuild(const Eigen::MatrixXd& tanimoto_gram, const GpHyperparams& h) {
    const detail::KernelFactor factor = detail::factor_kernel(tanimoto_gram, h);
    const int n = static_cast<int>(factor.chol_lower.rows());
    reserve(n);
    storage_.topLeftCorner(n, n) = factor.chol_lower;
    n_ = n;
    jitter_ = factor.jitter;
  }

  Eigen::VectorXd solve_weights(const Eigen::VectorXd& z) const {
    auto lower_view = storage_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>();
    Eigen::VectorXd alpha = lower_view.solve(z);
    storage_.topLeftCorner(n_, n_).transpose().triangularView<Eigen::Upper>().solveInPlace(alpha);
    return alpha;
  }

 private:
  void reserve(int needed) {
    if (storage_.rows() >= needed) {
      return;
    }
    const int capacity = std::max(needed, static_cast<int>(storage_.rows()) * 2 + 8);
    Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(capacity, capacity);
    grown.topLeftCorner(n_, n_) = storage_.topLeftCorner(n_, n_);
    storage_ = std::move(grown);
  }

  Eigen::MatrixXd storage_ = Eigen::MatrixXd::Zero(0, 0);
  int n_ = 0;
  double jitter_ = 0.0;
};

}  // namespace

template <typename Fp>
BoTrajectory run_bo(std::span<const Fp> pool_fps, const Eigen::VectorXd& pool_values,
                    const BoConfig& cfg, const GpHyperparams& hyper, const BoInspector& inspect) {
  const int pool_size = static_cast<int>(pool_fps.size());
  if (pool_values.size() != pool_size) {
    throw std::invalid_argument("pool fingerprints and values must align");
  }
  if (cfg.init_size < 1 || cfg.budget < 1) {
    throw std::invalid_argument("init_size and budget must be positive");
  }
  if (cfg.init_size + cfg.budget > pool_size) {
    throw std::invalid_argument("init_size + budget exceeds the pool size");
  }
  for (Eigen::Index i = 0; i < pool_values.size(); ++i) {
    if (!std::isfinite(pool_values[i])) {
      throw std::invalid_argument("pool objective values must be finite");
    }
  }
  GpHyperparams h = hyper;
  h.validate();

  BoTrajectory trajectory;

  // seeded initial design from the worst init_percentile of the pool
  const std::vector<int> eligible = bottom_fraction(
      std::span<const double>(pool_values.data(), pool_values.size()), cfg.init_percentile,
      cfg.direction);
  if (static_cast<int>(eligible.size()) < cfg.init_size) {
    throw std::invalid_argument("init_size exceeds the eligible bottom fraction");
  }
  trajectory.initial_indices = subsample(eligible, cfg.init_size, cfg.seed);

  std::vector<char> observed(pool_size, 0);
  std::vector<int> observed_indices;
  std::vector<double> observed_values;
  std::vector<Eigen::VectorXd> pool_rows;  // tanimoto of each observed point vs whole pool
  observed_indices.reserve(cfg.init_size + cfg.budget);
  pool_rows.reserve(cfg.init_size + cfg.budget);

  auto tanimoto_row = [&](int index) {
    Eigen::VectorXd row(pool_size);
    for (int j = 0; j < pool_size; ++j) {
      row[j] = tanimoto(pool_fps[index], pool_fps[j]);
    }
    return row;
  };

  GrowingCholesky chol(0.0);
  auto gram_of_observed = [&]() {
    const int n = static_cast<int>(observed_indices.size());
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        gram(i, j) = pool_rows[i][observed_indices[j]];
      }
    }
    return gram;
  };

  auto append_observation = [&](int index, bool refactor) {
    observed[index] = 1;
    observed_indices.push_back(index);
    observed_values.push_back(pool_values[index]);
    pool_rows.push_back(tanimoto_row(index));
    if (refactor) {
      return;  // caller rebuilds in bulk
    }
    const int n = static_cast<int>(observed_indices.size()) - 1;
    Eigen::VectorXd cross(n);
    for (int i = 0; i < n; ++i) {
      cross[i] = h.amplitude_sq * pool_rows[i][index];
    }
    const double diagonal = h.amplitude_sq * pool_rows.back()[index] + h.noise_sq;
    if (!chol.extend(cross, diagonal)) {
      chol.rebuild(gram_of_observed(), h);
    }
  };

  for (int index : trajectory.initial_indices) {
    append_observation(index, /*refactor=*/true);
  }
  chol.rebuild(gram_of_observed(), h);

  double incumbent = observed_values.front();
  for (double value : observed_values) {
    if (improves(value, incumbent, cfg.direction)) {
      incumbent = value;
    }
  }

  trajectory.best_curve.reserve(cfg.budget);
  std::vector<int> candidates;
  candidates.reserve(pool_size);

  for (int iteration = 1; iteration <= cfg.budget; ++iteration) {
    if (cfg.refit_hyperparams) {
      Eigen::VectorXd y =
          Eigen::Map<const Eigen::VectorXd>(observed_values.data(), observed_values.size());
      const OptimizeReport report =
          detail::optimize_from_gram(gram_of_observed(), y, h, OptimizerConfig{});
      h = report.hyper;
      chol.rebuild(gram_of_observed(), h);
    }

    const int n = static_cast<int>(observed_indices.size());
    candidates.clear();
    for (int j = 0; j < pool_size; ++j) {
      if (!observed[j]) {
        candidates.push_back(j);
      }
    }
    const int m = static_cast<int>(candidates.size());

    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) {
      z[i] = observed_values[i] - h.mean_const;
    }
    const Eigen::VectorXd alpha = chol.solve_weights(z);

    Eigen::MatrixXd cross(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        cross(i, j) = h.amplitude_sq * pool_rows[i][candidates[j]];
      }
    }
    const Eigen::VectorXd means = (cross.transpose() * alpha).array() + h.mean_const;
    chol.lower().topLeftCorner(n, n).triangularView<Eigen::Lower>().solveInPlace(cross);
    Eigen::VectorXd variances(m);
    for (int j = 0; j < m; ++j) {
      variances[j] = std::max(0.0, h.amplitude_sq - cross.col(j).squaredNorm());
    }

    if (inspect) {
      inspect(iteration, candidates, means, variances);
    }

    int chosen = -1;
    double best_ei = -1.0;
    for (int j = 0; j < m; ++j) {
      const double ei = expected_improvement(means[j], variances[j], incumbent, cfg.direction);
      if (!std::isfinite(ei)) {
        throw NumericalError("non-finite expected improvement at iteration " +
                             std::to_string(iteration));
      }
      if (ei > best_ei) {  // strict: ties keep the lowest pool index
        best_ei = ei;
        chosen = candidates[j];
      }
    }

    append_observation(chosen, /*refactor=*/false);
    trajectory.acquired.push_back(Acquisition{iteration, chosen, pool_values[chosen]});
    if (improves(pool_values[chosen], incumbent, cfg.direction)) {
      incumbent = pool_values[chosen];
    }
    trajectory.best_curve.push_back(incumbent);
  }

  const double pool_best = cfg.direction == Direction::kMinimize ? pool_values.minCoeff()
                                                                 : pool_values.maxCoeff();
  const double pool_worst = cfg.direction == Direction::kMinimize ? pool_values.maxCoeff()
                                                                  : pool_values.minCoeff();
  trajectory.auc = auc_best_observed(trajectory.best_curve, pool_best, pool_worst);
  return trajectory;
}

template BoTrajectory run_bo<SparseFingerprint>(std::span<const SparseFingerprint>,
                                                const Eigen::VectorXd&, const BoConfig&,
                                                const GpHyperparams&, const BoInspector&);
template BoTrajectory run_bo<DenseFingerprint>(std::span<const DenseFingerprint>,
                                               const Eigen::VectorXd&, const BoConfig&,
                                               const GpHyperparams&, const BoInspector&);

}  // namespace molgp
