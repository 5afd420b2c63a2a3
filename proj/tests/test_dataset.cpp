// SPDX-License-Identifier: Apache-2.0
#include "molgp/dataset.hpp"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "molgp/rng.hpp"
#include "support/fixture.hpp"

namespace molgp {
namespace {

using testsupport::write_temp_file;

TEST(LoadDataset, DropsMissingTargetsWithWarning) {
  const auto path = write_temp_file("missing_target.csv",
                                    "id,smiles,score\n"
                                    "a,CCO,-1.5\n"
                                    "b,CCC,nan\n"
                                    "c,CCN,-2.5\n");
  const Dataset dataset = load_dataset(path, "score");
  EXPECT_EQ(dataset.records.size(), 2u);
  EXPECT_EQ(dataset.stats.dropped_missing_target, 1);
  EXPECT_EQ(dataset.records[0].id, "a");
  EXPECT_DOUBLE_EQ(dataset.records[1].targets.at("score"), -2.5);
}

TEST(LoadDataset, DropsUnparseableSmilesWithWarning) {
  const auto path = write_temp_file("bad_smiles.csv",
                                    "id,smiles,score\n"
                                    "a,CCO,-1.5\n"
                                    "b,C1CC,-2.0\n");
  const Dataset dataset = load_dataset(path, "score");
  EXPECT_EQ(dataset.records.size(), 1u);
  EXPECT_EQ(dataset.stats.dropped_bad_smiles, 1);
}

TEST(LoadDataset, MissingColumnNamesAvailableOnes) {
  const auto path = write_temp_file("no_target.csv",
                                    "id,smiles,logp\n"
                                    "a,CCO,1.0\n");
  try {
    load_dataset(path, "score");
    FAIL() << "expected DataError";
  } catch (const DataError& error) {
    EXPECT_NE(std::string(error.what()).find("logp"), std::string::npos);
    EXPECT_NE(std::string(error.what()).find("score"), std::string::npos);
  }
}

TEST(LoadDataset, TabSeparatedWithInchikeyColumn) {
  const auto path = write_temp_file("tabbed.tsv",
                                    "inchikey\tsmiles\tESR2\tF2\n"
                                    "AAA\tCCO\t-1.0\t-3.0\n"
                                    "BBB\tCCC\t-2.0\t-4.0\n");
  const Dataset dataset = load_dataset(path, "F2");
  ASSERT_EQ(dataset.records.size(), 2u);
  EXPECT_EQ(dataset.records[0].id, "AAA");
  EXPECT_DOUBLE_EQ(dataset.records[0].targets.at("F2"), -3.0);
}

TEST(LoadDataset, RejectsDuplicateIds) {
  const auto path = write_temp_file("dup_ids.csv",
                                    "id,smiles,score\n"
                                    "a,CCO,1.0\n"
                                    "a,CCC,2.0\n");
  EXPECT_THROW(load_dataset(path, "score"), DataError);
}

TEST(LoadDataset, ZeroUsableRecordsFails) {
  const auto path = write_temp_file("all_bad.csv",
                                    "id,smiles,score\n"
                                    "a,C1CC,1.0\n"
                                    "b,CCO,none\n");
  EXPECT_THROW(load_dataset(path, "score"), DataError);
  EXPECT_THROW(load_dataset(path / "missing.csv", "score"), DataError);
}

TEST(LoadSmilesTable, BareListWithoutHeader) {
  const auto path = write_temp_file("plain.smi",
                                    "CCO\n"
                                    "C1CC1 cyclopropane\n"
                                    "not_a_smiles\n");
  const Dataset dataset = load_smiles_table(path);
  ASSERT_EQ(dataset.records.size(), 2u);
  EXPECT_EQ(dataset.records[1].id, "cyclopropane");
  EXPECT_EQ(dataset.stats.dropped_bad_smiles, 1);
}

TEST(LoadSmilesTable, TableWithSmilesColumn) {
  const auto path = write_temp_file("table.csv",
                                    "id,smiles\n"
                                    "m1,CCO\n"
                                    "m2,c1ccccc1\n");
  const Dataset dataset = load_smiles_table(path);
  ASSERT_EQ(dataset.records.size(), 2u);
  EXPECT_EQ(dataset.records[0].id, "m1");
}

TEST(ApplySplit, PartitionsAndExcludes) {
  const auto data_path = write_temp_file("split_data.csv",
                                         "id,smiles,score\n"
                                         "a,CCO,1.0\n"
                                         "b,CCC,2.0\n"
                                         "c,CCN,3.0\n"
                                         "d,CCCl,4.0\n");
  const auto split_path = write_temp_file("split_labels.csv",
                                          "record_id,split\n"
                                          "a,train\n"
                                          "b,test\n"
                                          "c,train\n"
                                          "zz,train\n");
  const Dataset dataset = load_dataset(data_path, "score");
  const Dataset labelled = apply_split(dataset, split_path);
  EXPECT_EQ(labelled.records.size(), 3u);  // d excluded
  EXPECT_EQ(labelled.indices_with_split(SplitLabel::kTrain).size(), 2u);
  EXPECT_EQ(labelled.indices_with_split(SplitLabel::kTest).size(), 1u);
  EXPECT_EQ(labelled.stats.split_ids_unmatched, 1);
}

TEST(ApplySplit, AllTrainLeavesTestEmpty) {
  const auto data_path = write_temp_file("split_data2.csv",
                                         "id,smiles,score\n"
                                         "a,CCO,1.0\n"
                                         "b,CCC,2.0\n");
  const auto split_path = write_temp_file("split_labels2.csv", "a,train\nb,train\n");
  const Dataset labelled = apply_split(load_dataset(data_path, "score"), split_path);
  EXPECT_EQ(labelled.indices_with_split(SplitLabel::kTrain).size(), 2u);
  EXPECT_TRUE(labelled.indices_with_split(SplitLabel::kTest).empty());
}

TEST(ApplySplit, MalformedLabelRejected) {
  const auto data_path = write_temp_file("split_data3.csv",
                                         "id,smiles,score\n"
                                         "a,CCO,1.0\n");
  const auto split_path = write_temp_file("split_labels3.csv", "a,train\nb,validation\n");
  EXPECT_THROW(apply_split(load_dataset(data_path, "score"), split_path), DataError);
}

TEST(Subsample, FullDrawIsPermutation) {
  std::vector<int> indices = {4, 8, 15, 16, 23, 42};
  const std::vector<int> sampled = subsample(indices, 6, 123);
  std::vector<int> sorted = sampled;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, indices);
}

TEST(Subsample, DeterministicPerSeed) {
  std::vector<int> indices(100);
  for (int i = 0; i < 100; ++i) indices[i] = i;
  EXPECT_EQ(subsample(indices, 10, 7), subsample(indices, 10, 7));
  EXPECT_NE(subsample(indices, 10, 7), subsample(indices, 10, 8));
}

TEST(Subsample, RejectsOversizedRequest) {
  std::vector<int> indices = {1, 2, 3};
  EXPECT_THROW(subsample(indices, 4, 0), std::invalid_argument);
}

TEST(Subsample, SingleDrawFrequenciesAreUniform) {
  std::vector<int> indices(10);
  for (int i = 0; i < 10; ++i) indices[i] = i;
  std::vector<int> counts(10, 0);
  for (int draw = 0; draw < 10000; ++draw) {
    ++counts[subsample(indices, 1, 20000 + draw)[0]];
  }
  for (int i = 0; i < 10; ++i) {
    EXPECT_GE(counts[i], 950) << "element " << i;
    EXPECT_LE(counts[i], 1050) << "element " << i;
  }
}

TEST(BottomFraction, HandExamples) {
  const std::vector<double> values = {3.0, 1.0, 2.0};
  EXPECT_EQ(bottom_fraction(values, 1.0 / 3.0, Direction::kMinimize), (std::vector<int>{0}));
  EXPECT_EQ(bottom_fraction(values, 2.0 / 3.0, Direction::kMaximize), (std::vector<int>{1, 2}));
  const std::vector<int> everything = bottom_fraction(values, 1.0, Direction::kMinimize);
  EXPECT_EQ(everything, (std::vector<int>{0, 1, 2}));
}

TEST(BottomFraction, TiesBreakByAscendingIndex) {
  const std::vector<double> values = {5.0, 5.0, 5.0, 1.0};
  EXPECT_EQ(bottom_fraction(values, 0.5, Direction::kMinimize), (std::vector<int>{0, 1}));
}

TEST(BottomFraction, Errors) {
  EXPECT_THROW(bottom_fraction({}, 0.5, Direction::kMinimize), std::invalid_argument);
  const std::vector<double> values = {1.0};
  EXPECT_THROW(bottom_fraction(values, 0.0, Direction::kMinimize), std::invalid_argument);
  EXPECT_THROW(bottom_fraction(values, 1.5, Direction::kMinimize), std::invalid_argument);
}

TEST(Rng, DerivedSeedsAreStablePrefixes) {
  // extending the trial count must not disturb earlier seeds
  std::vector<std::uint64_t> five, ten;
  for (int i = 0; i < 5; ++i) five.push_back(derive_seed(99, i));
  for (int i = 0; i < 10; ++i) ten.push_back(derive_seed(99, i));
  for (int i = 0; i < 5; ++i) EXPECT_EQ(five[i], ten[i]);
  EXPECT_NE(ten[0], ten[1]);
}

TEST(Rng, BoundedDrawsStayInRange) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(rng.below(17), 17u);
  }
  Rng again(1);
  Rng fresh(1);
  for (int i = 0; i < 32; ++i) {
    EXPECT_EQ(again.next_u64(), fresh.next_u64());
  }
}

}  // namespace
}  // namespace molgp
