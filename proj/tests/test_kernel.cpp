// SPDX-License-Identifier: Apache-2.0
#include "molgp/kernel.hpp"

#include <gtest/gtest.h>

#include "molgp/smiles.hpp"
#include "support/fixture.hpp"

namespace molgp {
namespace {

TEST(Tanimoto, IdenticalNonEmpty) {
  const SparseFingerprint fp({{1, 2}, {9, 5}});
  EXPECT_EQ(tanimoto(fp, fp), 1.0);
}

TEST(Tanimoto, DisjointSupports) {
  const SparseFingerprint a({{1, 2}});
  const SparseFingerprint b({{2, 3}});
  EXPECT_EQ(tanimoto(a, b), 0.0);
}

TEST(Tanimoto, HandComputedCounts) {
  // min-sum 1, max-sum 2 + 1 + 3 = 6
  const SparseFingerprint a({{1, 2}, {2, 1}});
  const SparseFingerprint b({{1, 1}, {3, 3}});
  EXPECT_EQ(tanimoto(a, b), 1.0 / 6.0);
  EXPECT_EQ(tanimoto(b, a), 1.0 / 6.0);
}

TEST(Tanimoto, EmptyConvention) {
  const SparseFingerprint empty;
  const SparseFingerprint fp({{1, 1}});
  EXPECT_EQ(tanimoto(empty, empty), 0.0);
  EXPECT_EQ(tanimoto(empty, fp), 0.0);
  DenseFingerprint zero_a, zero_b;
  zero_a.counts.assign(8, 0);
  zero_b.counts.assign(8, 0);
  EXPECT_EQ(tanimoto(zero_a, zero_b), 0.0);
}

TEST(Tanimoto, DenseDimMismatchThrows) {
  DenseFingerprint a, b;
  a.counts.assign(4, 1);
  b.counts.assign(8, 1);
  EXPECT_THROW(tanimoto(a, b), std::invalid_argument);
}

TEST(Tanimoto, SymmetryAndBoundsOnMolecules) {
  const auto slice = testsupport::load_fixture(40);
  const auto fps = testsupport::sparse_fps(slice.smiles);
  for (std::size_t i = 0; i < fps.size(); ++i) {
    for (std::size_t j = i; j < fps.size(); ++j) {
      const double t = tanimoto(fps[i], fps[j]);
      EXPECT_EQ(t, tanimoto(fps[j], fps[i]));
      EXPECT_GE(t, 0.0);
      EXPECT_LE(t, 1.0);
    }
  }
}

TEST(Tanimoto, SparseDenseAgreeWithoutCollisions) {
  // identifiers all below the fold dim, so folding is injective
  const SparseFingerprint a({{3, 2}, {5, 1}, {11, 4}});
  const SparseFingerprint b({{3, 1}, {9, 4}});
  EXPECT_EQ(tanimoto(a, b), tanimoto(fold(a, 16), fold(b, 16)));
}

TEST(Tanimoto, FoldingNeverUnderestimates) {
  const auto slice = testsupport::load_fixture(60);
  const auto fps = testsupport::sparse_fps(slice.smiles);
  for (std::size_t i = 0; i + 1 < fps.size(); i += 2) {
    const double exact = tanimoto(fps[i], fps[i + 1]);
    for (int dim : {2, 3, 32, 512}) {
      const double folded = tanimoto(fold(fps[i], dim), fold(fps[i + 1], dim));
      EXPECT_GE(folded, exact - 1e-12);
    }
  }
}

TEST(Covariance, SingleMoleculeWithNoise) {
  const std::vector<SparseFingerprint> x = {SparseFingerprint({{1, 1}})};
  GpHyperparams h;
  h.amplitude_sq = 2.0;
  h.noise_sq = 0.5;
  const Eigen::MatrixXd k =
      covariance(std::span<const SparseFingerprint>(x), std::span<const SparseFingerprint>(x), h,
                 /*same_set=*/true);
  ASSERT_EQ(k.rows(), 1);
  EXPECT_DOUBLE_EQ(k(0, 0), 2.5);
}

TEST(Covariance, CrossCovarianceAddsNoNoise) {
  const std::vector<SparseFingerprint> x = {SparseFingerprint({{1, 1}}),
                                            SparseFingerprint({{2, 2}})};
  GpHyperparams h;
  h.amplitude_sq = 3.0;
  h.noise_sq = 0.7;
  const Eigen::MatrixXd cross =
      covariance(std::span<const SparseFingerprint>(x), std::span<const SparseFingerprint>(x), h,
                 /*same_set=*/false);
  EXPECT_DOUBLE_EQ(cross(0, 0), 3.0);  // self similarity scaled, no delta
  EXPECT_DOUBLE_EQ(cross(1, 1), 3.0);
  EXPECT_DOUBLE_EQ(cross(0, 1), 0.0);
}

TEST(Covariance, IdentityScalingGivesRawTanimoto) {
  const auto slice = testsupport::load_fixture(12);
  const auto fps = testsupport::sparse_fps(slice.smiles);
  const std::span<const SparseFingerprint> view(fps);
  GpHyperparams h;  // amplitude 1, noise 0
  const Eigen::MatrixXd k = covariance(view, view, h, true);
  const Eigen::MatrixXd t = tanimoto_matrix(view, view);
  EXPECT_LT((k - t).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Covariance, GramIsPositiveSemidefinite) {
  const auto slice = testsupport::load_fixture(50);
  const auto fps = testsupport::sparse_fps(slice.smiles);
  const std::span<const SparseFingerprint> view(fps);
  GpHyperparams h;
  h.amplitude_sq = 1.7;
  Eigen::MatrixXd k = covariance(view, view, h, false);
  k = 0.5 * (k + k.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
  EXPECT_GE(solver.eigenvalues().minCoeff(),
            -1e-8 * solver.eigenvalues().maxCoeff());
}

TEST(GpHyperparams, Validation) {
  GpHyperparams h;
  h.amplitude_sq = 0.0;
  EXPECT_THROW(h.validate(), std::invalid_argument);
  h.amplitude_sq = 1.0;
  h.noise_sq = -1.0;
  EXPECT_THROW(h.validate(), std::invalid_argument);
  h.noise_sq = 0.0;
  EXPECT_NO_THROW(h.validate());
}

}  // namespace
}  // namespace molgp
