// SPDX-License-Identifier: Apache-2.0
#include "molgp/fingerprint.hpp"

#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "molgp/smiles.hpp"
#include "support/fixture.hpp"

namespace molgp {
namespace {

SparseFingerprint fp_of(const char* smiles, int radius) {
  return morgan_sparse(parse_smiles(smiles), radius);
}

TEST(MorganSparse, SingleAtomAnyRadius) {
  // no bonds, so iterations past zero add no coverage
  const SparseFingerprint fp = fp_of("C", 2);
  ASSERT_EQ(fp.size(), 1u);
  EXPECT_EQ(fp.entries()[0].second, 1u);
  EXPECT_EQ(fp, fp_of("C", 0));
}

TEST(MorganSparse, EthaneDeduplicatesSharedEnvironment) {
  // both radius-1 environments cover the same single bond: one survives
  const SparseFingerprint fp = fp_of("CC", 1);
  ASSERT_EQ(fp.size(), 2u);
  const auto inv = initial_atom_invariants(parse_smiles("CC"));
  EXPECT_EQ(fp.count_of(inv[0]), 2u);
  EXPECT_EQ(fp.total_count(), 3u);
}

TEST(MorganSparse, RadiusZeroEqualsInitialInvariants) {
  for (const char* smiles : {"CC(=O)OC1=CC=CC=C1C(=O)O", "c1ccncc1", "C.O"}) {
    const MolGraph mol = parse_smiles(smiles);
    const SparseFingerprint fp = morgan_sparse(mol, 0);
    std::map<std::uint64_t, std::uint32_t> expected;
    for (std::uint64_t id : initial_atom_invariants(mol)) {
      ++expected[id];
    }
    ASSERT_EQ(fp.size(), expected.size());
    for (const auto& [id, count] : expected) {
      EXPECT_EQ(fp.count_of(id), count);
    }
  }
}

TEST(MorganSparse, CountBoundAndDeterminism) {
  for (const char* smiles :
       {"CC(C)CC1=CC=C(C=C1)C(C)C(=O)O", "c1ccc2ccccc2c1", "CCO", "C1CC1.C1CC1"}) {
    const MolGraph mol = parse_smiles(smiles);
    for (int radius : {0, 1, 2, 3}) {
      const SparseFingerprint fp = morgan_sparse(mol, radius);
      EXPECT_LE(fp.total_count(),
                static_cast<std::uint64_t>(mol.atom_count()) * (radius + 1));
      EXPECT_EQ(fp, morgan_sparse(mol, radius));
    }
  }
}

TEST(MorganSparse, RadiusBounds) {
  const MolGraph mol = parse_smiles("CC");
  EXPECT_THROW(morgan_sparse(mol, -1), std::invalid_argument);
  EXPECT_THROW(morgan_sparse(mol, 11), std::invalid_argument);
}

TEST(MorganSparse, EquivalentWritingsAgree) {
  EXPECT_EQ(fp_of("CCO", 2), fp_of("OCC", 2));
  EXPECT_EQ(fp_of("Cc1ccccc1", 2), fp_of("c1ccccc1C", 2));
  EXPECT_EQ(fp_of("CC(=O)OC1=CC=CC=C1C(=O)O", 2), fp_of("OC(=O)C1=CC=CC=C1OC(C)=O", 2));
  EXPECT_EQ(fp_of("C1CC1", 2), fp_of("C2CC2", 2));
}

TEST(Fold, SumsCollidingSlots) {
  const SparseFingerprint fp({{5, 1}, {37, 2}});
  const DenseFingerprint dense = fold(fp, 32);
  ASSERT_EQ(dense.dim(), 32);
  EXPECT_EQ(dense.counts[5], 3u);  // 37 mod 32 = 5
  EXPECT_EQ(dense.total_count(), fp.total_count());
}

TEST(Fold, PreservesMass) {
  for (const char* smiles : {"CC(=O)OC1=CC=CC=C1C(=O)O", "c1ccncc1CCN", "C"}) {
    const SparseFingerprint fp = fp_of(smiles, 2);
    for (int dim : {1, 7, 32, 512, 4096}) {
      EXPECT_EQ(fold(fp, dim).total_count(), fp.total_count());
    }
  }
}

TEST(Fold, EmptyFingerprint) {
  const DenseFingerprint dense = fold(SparseFingerprint(), 512);
  EXPECT_EQ(dense.dim(), 512);
  EXPECT_EQ(dense.total_count(), 0u);
}

TEST(Fold, RejectsBadDim) {
  EXPECT_THROW(fold(SparseFingerprint(), 0), std::invalid_argument);
}

TEST(Fold, RefoldingMatchesDirectFold) {
  // folding to d2 then reducing indices mod d1 (d1 | d2) equals folding
  // straight to d1
  const auto slice = testsupport::load_fixture(64);
  const auto fps = testsupport::sparse_fps(slice.smiles);
  const std::pair<int, int> dim_pairs[] = {{32, 512}, {512, 4096}, {64, 128}, {3, 12}};
  for (const auto& fp : fps) {
    for (const auto& [d1, d2] : dim_pairs) {
      const DenseFingerprint wide = fold(fp, d2);
      DenseFingerprint refolded;
      refolded.counts.assign(d1, 0);
      for (int i = 0; i < d2; ++i) {
        refolded.counts[i % d1] += wide.counts[i];
      }
      EXPECT_EQ(refolded, fold(fp, d1));
    }
  }
}

TEST(SortSliceFit, TieBreaksByAscendingIdentifier) {
  // support(10) = support(20) = 2, so the smaller identifier wins
  const std::vector<SparseFingerprint> corpus = {
      SparseFingerprint({{10, 5}}),
      SparseFingerprint({{10, 1}, {20, 1}}),
      SparseFingerprint({{20, 2}}),
  };
  const SortSliceVocabulary vocab = sortslice_fit(corpus, 1);
  ASSERT_EQ(vocab.dim(), 1);
  EXPECT_EQ(vocab.ordered_ids()[0], 10u);
}

TEST(SortSliceFit, ShrinksWhenFewIdentifiers) {
  const std::vector<SparseFingerprint> corpus = {SparseFingerprint({{10, 1}})};
  const SortSliceVocabulary vocab = sortslice_fit(corpus, 4);
  EXPECT_EQ(vocab.dim(), 1);
  EXPECT_NE(vocab.provenance().find("shrunk"), std::string::npos);
}

TEST(SortSliceFit, SupportCountsPresenceNotMultiplicity) {
  // id 10 appears in all N fingerprints, id 20 in N-1; multiplicities do not
  // matter
  std::vector<SparseFingerprint> corpus;
  const int n = 6;
  corpus.push_back(SparseFingerprint({{10, 1}}));
  for (int i = 1; i < n; ++i) {
    corpus.push_back(SparseFingerprint({{10, 1}, {20, 9}}));
  }
  const SortSliceVocabulary vocab = sortslice_fit(corpus, 1);
  EXPECT_EQ(vocab.ordered_ids()[0], 10u);
}

TEST(SortSliceFit, EmptyCorpusFails) {
  EXPECT_THROW(sortslice_fit({}, 4), std::invalid_argument);
}

TEST(SortSliceEncode, DropsOutOfVocabularyIdentifiers) {
  const SortSliceVocabulary vocab({10, 20}, "test");
  const SparseFingerprint fp({{10, 2}, {99, 7}});
  const DenseFingerprint dense = sortslice_encode(fp, vocab);
  ASSERT_EQ(dense.dim(), 2);
  EXPECT_EQ(dense.counts[0], 2u);
  EXPECT_EQ(dense.counts[1], 0u);
}

TEST(SortSliceEncode, FullCoverageKeepsTotalCount) {
  const SparseFingerprint fp({{10, 2}, {20, 3}});
  const SortSliceVocabulary vocab({10, 20, 30}, "test");
  EXPECT_EQ(sortslice_encode(fp, vocab).total_count(), fp.total_count());
}

TEST(SortSliceEncode, EmptyFingerprintGivesZeros) {
  const SortSliceVocabulary vocab({10, 20}, "test");
  EXPECT_EQ(sortslice_encode(SparseFingerprint(), vocab).total_count(), 0u);
}

TEST(SortSliceEncode, InjectiveOnVocabulary) {
  // every populated slot holds exactly the count of its own identifier
  const auto slice = testsupport::load_fixture(128);
  const auto fps = testsupport::sparse_fps(slice.smiles);
  const SortSliceVocabulary vocab = sortslice_fit(fps, 256);
  for (const auto& fp : fps) {
    const DenseFingerprint dense = sortslice_encode(fp, vocab);
    for (int slot = 0; slot < dense.dim(); ++slot) {
      EXPECT_EQ(dense.counts[slot], fp.count_of(vocab.ordered_ids()[slot]));
    }
  }
}

TEST(SortSliceVocabulary, RejectsDuplicates) {
  EXPECT_THROW(SortSliceVocabulary({10, 10}, "bad"), std::invalid_argument);
}

TEST(SortSliceVocabulary, FileRoundTrip) {
  const SortSliceVocabulary vocab({42, 7, 123456789012345ull}, "fixture corpus, radius=2");
  std::stringstream buffer;
  vocab.write(buffer);
  const SortSliceVocabulary loaded = SortSliceVocabulary::read(buffer);
  EXPECT_EQ(loaded.ordered_ids(), vocab.ordered_ids());
  EXPECT_EQ(loaded.provenance(), vocab.provenance());
  EXPECT_EQ(loaded.slot_of(7), 1);
  EXPECT_FALSE(loaded.slot_of(8).has_value());
}

TEST(FormatFingerprint, AscendingIdsAndSlots) {
  const SparseFingerprint fp({{20, 3}, {10, 1}});
  EXPECT_EQ(format_fingerprint(fp), "10:1 20:3");
  DenseFingerprint dense;
  dense.counts = {0, 2, 0, 5};
  EXPECT_EQ(format_fingerprint(dense), "1:2 3:5");
  EXPECT_EQ(format_fingerprint(SparseFingerprint()), "");
}

TEST(SparseFingerprint, RejectsInvalidEntries) {
  EXPECT_THROW(SparseFingerprint({{1, 0}}), std::invalid_argument);
  EXPECT_THROW(SparseFingerprint({{1, 1}, {1, 2}}), std::invalid_argument);
}

}  // namespace
}  // namespace molgp
