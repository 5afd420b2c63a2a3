// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "molgp/fingerprint.hpp"

namespace molgp {

// Covariance hyperparameters: k(x, x') = amplitude_sq * tanimoto(x, x')
// + noise_sq on the self-Gram diagonal, with a constant mean.
struct GpHyperparams {
  double amplitude_sq = 1.0;
  double noise_sq = 0.0;
  double mean_const = 0.0;

  void validate() const {
    if (!(amplitude_sq > 0.0) || !std::isfinite(amplitude_sq)) {
      throw std::invalid_argument("amplitude_sq must be positive and finite");
    }
    if (!(noise_sq >= 0.0) || !std::isfinite(noise_sq)) {
      throw std::invalid_argument("noise_sq must be non-negative and finite");
    }
    if (!std::isfinite(mean_const)) {
      throw std::invalid_argument("mean_const must be finite");
    }
  }
};

// Count Tanimoto: sum(min) / sum(max) over the support union. Both sums are
// accumulated in exact integer arithmetic and divided once; the max-sum is
// derived from the identity sum(max) = total(a) + total(b) - sum(min).
// Two empty fingerprints give 0 by convention.
double tanimoto(const SparseFingerprint& a, const SparseFingerprint& b);

// Dense variant over all coordinates. Throws on dim mismatch.
double tanimoto(const DenseFingerprint& a, const DenseFingerprint& b);

namespace detail {

inline void check_consistent_dims(std::span<const SparseFingerprint>,
                                  std::span<const SparseFingerprint>) {}

inline void check_consistent_dims(std::span<const DenseFingerprint> xs,
                                  std::span<const DenseFingerprint> ys) {
  int dim = -1;
  for (const auto& fp : xs) {
    if (dim < 0) dim = fp.dim();
    if (fp.dim() != dim) throw std::invalid_argument("dense fingerprint dim mismatch");
  }
  for (const auto& fp : ys) {
    if (dim < 0) dim = fp.dim();
    if (fp.dim() != dim) throw std::invalid_argument("dense fingerprint dim mismatch");
  }
}

}  // namespace detail

// Raw Tanimoto values, xs rows by ys columns. Rows are independent, so the
// loop may run in parallel; within a row columns are filled in ascending
// order, keeping results identical for any thread count.
template <typename Fp>
Eigen::MatrixXd tanimoto_matrix(std::span<const Fp> xs, std::span<const Fp> ys) {
  detail::check_consistent_dims(xs, ys);
  Eigen::MatrixXd values(xs.size(), ys.size());
  const std::int64_t rows = static_cast<std::int64_t>(xs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      values(i, j) = tanimoto(xs[i], ys[j]);
    }
  }
  return values;
}

// Full covariance: amplitude_sq * tanimoto + noise_sq * delta(i, j). The
// delta applies only when xs and ys are the same set (same_set = true) and
// only on the diagonal; cross-covariances never receive noise.
template <typename Fp>
Eigen::MatrixXd covariance(std::span<const Fp> xs, std::span<const Fp> ys,
                           const GpHyperparams& h, bool same_set) {
  h.validate();
  if (same_set && xs.size() != ys.size()) {
    throw std::invalid_argument("same_set covariance requires equally sized sets");
  }
  Eigen::MatrixXd k = h.amplitude_sq * tanimoto_matrix(xs, ys);
  if (same_set) {
    k.diagonal().array() += h.noise_sq;
  }
  return k;
}

}  // namespace molgp
