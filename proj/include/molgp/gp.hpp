// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "molgp/kernel.hpp"

namespace molgp {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double population_mean(const Eigen::VectorXd& y) { return y.mean(); }

inline double population_variance(const Eigen::VectorXd& y) {
  const double mean = y.mean();
  return (y.array() - mean).square().sum() / static_cast<double>(y.size());
}

// Heuristic hyperparameters: amplitude = variance of the targets, noise =
// 0.01 * amplitude, constant mean = target mean. Throws for fewer than two
// targets or constant targets (zero variance is not a valid amplitude).
GpHyperparams default_hyperparams(const Eigen::VectorXd& y);

struct OptimizerConfig {
  double learning_rate = 0.01;
  int max_iters = 10000;
  double grad_norm_tol = 1e-3;
  double noise_floor_factor = 1e-4;
  // When false the constant mean stays at its initial value and only the two
  // variance parameters are optimized.
  bool optimize_mean = true;
};

struct OptimizeReport {
  GpHyperparams hyper;
  int iterations = 0;
  double initial_mll = 0.0;
  double final_mll = 0.0;
  double final_grad_norm = 0.0;
  // True when the optimizer could not beat the initial likelihood and the
  // initial hyperparameters were returned instead.
  bool fell_back_to_init = false;
};

namespace detail {

struct KernelFactor {
  Eigen::MatrixXd chol_lower;
  double jitter = 0.0;  // extra diagonal mass added to rescue factorization
};

// Factorizes amplitude_sq * T + noise_sq * I. If the Cholesky fails, adds a
// jitter of 1e-10 * trace(K)/n to the diagonal and retries up to three times
// with 10x escalation before giving up.
KernelFactor factor_kernel(const Eigen::MatrixXd& tanimoto_gram, const GpHyperparams& h);

double mll_from_gram(const Eigen::MatrixXd& tanimoto_gram, const Eigen::VectorXd& y,
                     const GpHyperparams& h);

// Gradient with respect to (log amplitude_sq, log noise_sq, mean_const).
Eigen::Vector3d mll_gradient_from_gram(const Eigen::MatrixXd& tanimoto_gram,
                                       const Eigen::VectorXd& y, const GpHyperparams& h);

OptimizeReport optimize_from_gram(const Eigen::MatrixXd& tanimoto_gram, const Eigen::VectorXd& y,
                                  const GpHyperparams& init, const OptimizerConfig& cfg);

}  // namespace detail

// Trained model: training fingerprints (one encoding, kept by value), the
// lower Cholesky factor of K = amplitude_sq * T + noise_sq * I (+ jitter if
// one was needed) and the weights alpha = K^-1 (y - mean).
class GpModel {
 public:
  using SparseSet = std::vector<SparseFingerprint>;
  using DenseSet = std::vector<DenseFingerprint>;

  const GpHyperparams& hyper() const { return hyper_; }
  const Eigen::MatrixXd& chol_factor() const { return chol_lower_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& train_targets() const { return targets_; }
  double applied_jitter() const { return jitter_; }
  int train_size() const { return static_cast<int>(targets_.size()); }
  bool sparse_encoded() const { return std::holds_alternative<SparseSet>(fps_); }

  const SparseSet& sparse_fps() const { return std::get<SparseSet>(fps_); }
  const DenseSet& dense_fps() const { return std::get<DenseSet>(fps_); }

  GpModel(std::variant<SparseSet, DenseSet> fps, Eigen::VectorXd targets, GpHyperparams hyper,
          Eigen::MatrixXd chol_lower, Eigen::VectorXd weights, double jitter)
      : fps_(std::move(fps)),
        targets_(std::move(targets)),
        hyper_(hyper),
        chol_lower_(std::move(chol_lower)),
        weights_(std::move(weights)),
        jitter_(jitter) {}

 private:
  std::variant<SparseSet, DenseSet> fps_;
  Eigen::VectorXd targets_;
  GpHyperparams hyper_;
  Eigen::MatrixXd chol_lower_;
  Eigen::VectorXd weights_;
  double jitter_ = 0.0;
};

GpModel fit(std::vector<SparseFingerprint> fps, Eigen::VectorXd y, const GpHyperparams& h);
GpModel fit(std::vector<DenseFingerprint> fps, Eigen::VectorXd y, const GpHyperparams& h);

struct Prediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

// Posterior mean and latent variance (amplitude_sq - k*^T K^-1 k*, clamped at
// zero). Set observation_noise to add noise_sq to every variance. Throws if
// the query encoding does not match the training encoding.
Prediction predict(const GpModel& model, std::span<const SparseFingerprint> query,
                   bool observation_noise = false);
Prediction predict(const GpModel& model, std::span<const DenseFingerprint> query,
                   bool observation_noise = false);

double log_marginal_likelihood(std::span<const SparseFingerprint> fps, const Eigen::VectorXd& y,
                               const GpHyperparams& h);
double log_marginal_likelihood(std::span<const DenseFingerprint> fps, const Eigen::VectorXd& y,
                               const GpHyperparams& h);

// Analytic gradient of the marginal log-likelihood with respect to
// (log amplitude_sq, log noise_sq, mean_const).
Eigen::Vector3d mll_gradient(std::span<const SparseFingerprint> fps, const Eigen::VectorXd& y,
                             const GpHyperparams& h);
Eigen::Vector3d mll_gradient(std::span<const DenseFingerprint> fps, const Eigen::VectorXd& y,
                             const GpHyperparams& h);

// Adam ascent (beta1 0.9, beta2 0.999, eps 1e-8) on (log amplitude_sq,
// log noise_sq, mean_const) from `init`. The Tanimoto Gram is computed once;
// the kernel matrix is rebuilt each step. After every step noise_sq is
// clamped to >= noise_floor_factor * variance(y). Stops on gradient norm
// below grad_norm_tol or after max_iters. The seed is recorded for
// reproducibility bookkeeping; the procedure itself is deterministic.
OptimizeReport optimize_hyperparams(std::span<const SparseFingerprint> fps,
                                    const Eigen::VectorXd& y, const GpHyperparams& init,
                                    const OptimizerConfig& cfg, std::uint64_t seed = 0);
OptimizeReport optimize_hyperparams(std::span<const DenseFingerprint> fps,
                                    const Eigen::VectorXd& y, const GpHyperparams& init,
                                    const OptimizerConfig& cfg, std::uint64_t seed = 0);

}  // namespace molgp
