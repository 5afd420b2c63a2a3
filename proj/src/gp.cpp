// SPDX-License-Identifier: Apache-2.0
#include "molgp/gp.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace molgp {

namespace detail {

KernelFactor factor_kernel(const Eigen::MatrixXd& tanimoto_gram, const GpHyperparams& h) {
  const Eigen::Index n = tanimoto_gram.rows();
  Eigen::MatrixXd kernel = h.amplitude_sq * tanimoto_gram;
  kernel.diagonal().array() += h.noise_sq;

  const double base_jitter = 1e-10 * kernel.trace() / static_cast<double>(n);
  double jitter = 0.0;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    Eigen::MatrixXd attempt_kernel = kernel;
    if (jitter > 0.0) {
      attempt_kernel.diagonal().array() += jitter;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(attempt_kernel);
    if (llt.info() == Eigen::Success) {
      return KernelFactor{Eigen::MatrixXd(llt.matrixL()), jitter};
    }
    jitter = (jitter == 0.0) ? base_jitter : jitter * 10.0;
  }
  std::ostringstream message;
  message << "kernel factorization failed after jitter escalation (final jitter " << jitter / 10.0
          << ")";
  throw NumericalError(message.str());
}

namespace {

struct Evaluation {
  double mll = 0.0;
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
};

// One factorization serves both the likelihood and its gradient. With
// K = a^2 T + (s + j) I and alpha = K^-1 (y - c):
//   d mll / d log a^2   = (z'a - s_eff a'a - n + s_eff tr K^-1) / 2
//   d mll / d log s^2   = s (a'a - tr K^-1) / 2
//   d mll / d c         = sum(alpha)
// where s_eff = s + jitter and tr K^-1 = ||L^-1||_F^2.
Evaluation evaluate(const Eigen::MatrixXd& tanimoto_gram, const Eigen::VectorXd& y,
                    const GpHyperparams& h) {
  const Eigen::Index n = tanimoto_gram.rows();
  const KernelFactor factor = factor_kernel(tanimoto_gram, h);
  const auto lower = factor.chol_lower.triangularView<Eigen::Lower>();

  const Eigen::VectorXd z = y.array() - h.mean_const;
  Eigen::VectorXd alpha = lower.solve(z);
  factor.chol_lower.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha);

  const double z_dot_alpha = z.dot(alpha);
  const double log_det_half = factor.chol_lower.diagonal().array().log().sum();

  Evaluation eval;
  eval.mll = -0.5 * z_dot_alpha - log_det_half -
             0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  Eigen::MatrixXd lower_inverse = Eigen::MatrixXd::Identity(n, n);
  lower.solveInPlace(lower_inverse);
  const double trace_kinv = lower_inverse.squaredNorm();

  const double alpha_sq = alpha.squaredNorm();
  const double noise_eff = h.noise_sq + factor.jitter;
  eval.gradient[0] =
      0.5 * (z_dot_alpha - noise_eff * alpha_sq - static_cast<double>(n) + noise_eff * trace_kinv);
  eval.gradient[1] = 0.5 * h.noise_sq * (alpha_sq - trace_kinv);
  eval.gradient[2] = alpha.sum();
  return eval;
}

}  // namespace

double mll_from_gram(const Eigen::MatrixXd& tanimoto_gram, const Eigen::VectorXd& y,
                     const GpHyperparams& h) {
  return evaluate(tanimoto_gram, y, h).mll;
}

Eigen::Vector3d mll_gradient_from_gram(const Eigen::MatrixXd& tanimoto_gram,
                                       const Eigen::VectorXd& y, const GpHyperparams& h) {
  return evaluate(tanimoto_gram, y, h).gradient;
}

OptimizeReport optimize_from_gram(const Eigen::MatrixXd& tanimoto_gram, const Eigen::VectorXd& y,
                                  const GpHyperparams& init, const OptimizerConfig& cfg) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;

  init.validate();
  const double noise_floor = cfg.noise_floor_factor * population_variance(y);

  GpHyperparams start = init;
  start.noise_sq = std::max(start.noise_sq, noise_floor);

  Eigen::Vector3d theta(std::log(start.amplitude_sq), std::log(start.noise_sq),
                        start.mean_const);
  auto hyper_at = [](const Eigen::Vector3d& t) {
    return GpHyperparams{std::exp(t[0]), std::exp(t[1]), t[2]};
  };

  const int active = cfg.optimize_mean ? 3 : 2;
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();

  Evaluation eval = evaluate(tanimoto_gram, y, start);
  const double initial_mll = eval.mll;
  if (!std::isfinite(initial_mll)) {
    throw NumericalError("non-finite marginal log-likelihood at the initial hyperparameters");
  }

  int iterations = 0;
  double grad_norm = eval.gradient.head(active).norm();
  for (int step = 1; step <= cfg.max_iters; ++step) {
    if (grad_norm < cfg.grad_norm_tol) {
      break;
    }
    iterations = step;

    Eigen::Vector3d g = eval.gradient;
    if (!cfg.optimize_mean) {
      g[2] = 0.0;
    }
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    const double bias1 = 1.0 - std::pow(kBeta1, step);
    const double bias2 = 1.0 - std::pow(kBeta2, step);
    const Eigen::Vector3d m_hat = m / bias1;
    const Eigen::Vector3d v_hat = v / bias2;
    theta += cfg.learning_rate *
             (m_hat.array() / (v_hat.array().sqrt() + kEps)).matrix();
    if (noise_floor > 0.0) {
      theta[1] = std::max(theta[1], std::log(noise_floor));
    }

    eval = evaluate(tanimoto_gram, y, hyper_at(theta));
    if (!std::isfinite(eval.mll)) {
      std::ostringstream message;
      message << "non-finite marginal log-likelihood at iteration " << step << " (log amp "
              << theta[0] << ", log noise " << theta[1] << ", mean " << theta[2] << ")";
      throw NumericalError(message.str());
    }
    grad_norm = eval.gradient.head(active).norm();
  }

  OptimizeReport report;
  report.iterations = iterations;
  report.initial_mll = initial_mll;
  report.final_grad_norm = grad_norm;
  if (eval.mll >= initial_mll) {
    report.hyper = hyper_at(theta);
    report.final_mll = eval.mll;
  } else {
    report.hyper = start;
    report.final_mll = initial_mll;
    report.fell_back_to_init = true;
  }
  return report;
}

}  // namespace detail

GpHyperparams default_hyperparams(const Eigen::VectorXd& y) {
  if (y.size() < 2) {
    throw std::invalid_argument("default_hyperparams needs at least two targets");
  }
  const double variance = population_variance(y);
  if (!(variance > 0.0)) {
    throw std::invalid_argument("targets are constant: zero variance is not a valid amplitude");
  }
  GpHyperparams h;
  h.amplitude_sq = variance;
  h.noise_sq = 0.01 * variance;
  h.mean_const = y.mean();
  return h;
}

namespace {

template <typename Fp>
GpModel fit_impl(std::vector<Fp> fps, Eigen::VectorXd y, const GpHyperparams& h) {
  h.validate();
  if (fps.empty() || static_cast<Eigen::Index>(fps.size()) != y.size()) {
    throw std::invalid_argument("fit needs equally many fingerprints and targets (>= 1)");
  }
  const Eigen::MatrixXd gram =
      tanimoto_matrix(std::span<const Fp>(fps), std::span<const Fp>(fps));
  detail::KernelFactor factor = detail::factor_kernel(gram, h);

  const Eigen::VectorXd z = y.array() - h.mean_const;
  Eigen::VectorXd alpha = factor.chol_lower.triangularView<Eigen::Lower>().solve(z);
  factor.chol_lower.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha);

  return GpModel(std::move(fps), std::move(y), h, std::move(factor.chol_lower), std::move(alpha),
                 factor.jitter);
}

template <typename Fp>
Prediction predict_impl(const GpModel& model, std::span<const Fp> train,
                        std::span<const Fp> query, bool observation_noise) {
  const GpHyperparams& h = model.hyper();
  const Eigen::MatrixXd cross =
      h.amplitude_sq * tanimoto_matrix(train, query);  // train x query

  Prediction out;
  out.mean = (cross.transpose() * model.weights()).array() + h.mean_const;

  Eigen::MatrixXd v = model.chol_factor().triangularView<Eigen::Lower>().solve(cross);
  out.variance.resize(static_cast<Eigen::Index>(query.size()));
  for (Eigen::Index j = 0; j < out.variance.size(); ++j) {
    out.variance[j] = std::max(0.0, h.amplitude_sq - v.col(j).squaredNorm());
    if (observation_noise) {
      out.variance[j] += h.noise_sq;
    }
  }
  return out;
}

template <typename Fp>
double mll_impl(std::span<const Fp> fps, const Eigen::VectorXd& y, const GpHyperparams& h) {
  h.validate();
  if (fps.empty() || static_cast<Eigen::Index>(fps.size()) != y.size()) {
    throw std::invalid_argument("log_marginal_likelihood needs matching fingerprints and targets");
  }
  return detail::mll_from_gram(tanimoto_matrix(fps, fps), y, h);
}

template <typename Fp>
Eigen::Vector3d gradient_impl(std::span<const Fp> fps, const Eigen::VectorXd& y,
                              const GpHyperparams& h) {
  h.validate();
  if (fps.empty() || static_cast<Eigen::Index>(fps.size()) != y.size()) {
    throw std::invalid_argument("mll_gradient needs matching fingerprints and targets");
  }
  return detail::mll_gradient_from_gram(tanimoto_matrix(fps, fps), y, h);
}

template <typename Fp>
OptimizeReport optimize_impl(std::span<const Fp> fps, const Eigen::VectorXd& y,
                             const GpHyperparams& init, const OptimizerConfig& cfg) {
  if (fps.empty() || static_cast<Eigen::Index>(fps.size()) != y.size()) {
    throw std::invalid_argument("optimize_hyperparams needs matching fingerprints and targets");
  }
  return detail::optimize_from_gram(tanimoto_matrix(fps, fps), y, init, cfg);
}

}  // namespace

GpModel fit(std::vector<SparseFingerprint> fps, Eigen::VectorXd y, const GpHyperparams& h) {
  return fit_impl(std::move(fps), std::move(y), h);
}

GpModel fit(std::vector<DenseFingerprint> fps, Eigen::VectorXd y, const GpHyperparams& h) {
  return fit_impl(std::move(fps), std::move(y), h);
}

Prediction predict(const GpModel& model, std::span<const SparseFingerprint> query,
                   bool observation_noise) {
  if (!model.sparse_encoded()) {
    throw std::invalid_argument("encoding mismatch: model was trained on dense fingerprints");
  }
  return predict_impl<SparseFingerprint>(model, model.sparse_fps(), query, observation_noise);
}

Prediction predict(const GpModel& model, std::span<const DenseFingerprint> query,
                   bool observation_noise) {
  if (model.sparse_encoded()) {
    throw std::invalid_argument("encoding mismatch: model was trained on sparse fingerprints");
  }
  return predict_impl<DenseFingerprint>(model, model.dense_fps(), query, observation_noise);
}

double log_marginal_likelihood(std::span<const SparseFingerprint> fps, const Eigen::VectorXd& y,
                               const GpHyperparams& h) {
  return mll_impl(fps, y, h);
}

double log_marginal_likelihood(std::span<const DenseFingerprint> fps, const Eigen::VectorXd& y,
                               const GpHyperparams& h) {
  return mll_impl(fps, y, h);
}

Eigen::Vector3d mll_gradient(std::span<const SparseFingerprint> fps, const Eigen::VectorXd& y,
                             const GpHyperparams& h) {
  return gradient_impl(fps, y, h);
}

Eigen::Vector3d mll_gradient(std::span<const DenseFingerprint> fps, const Eigen::VectorXd& y,
                             const GpHyperparams& h) {
  return gradient_impl(fps, y, h);
}

OptimizeReport optimize_hyperparams(std::span<const SparseFingerprint> fps,
                                    const Eigen::VectorXd& y, const GpHyperparams& init,
                                    const OptimizerConfig& cfg, std::uint64_t) {
  return optimize_impl(fps, y, init, cfg);
}

OptimizeReport optimize_hyperparams(std::span<const DenseFingerprint> fps,
                                    const Eigen::VectorXd& y, const GpHyperparams& init,
                                    const OptimizerConfig& cfg, std::uint64_t) {
  return optimize_impl(fps, y, init, cfg);
}

}  // namespace molgp
