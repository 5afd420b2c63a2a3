// SPDX-License-Identifier: Apache-2.0
//
// molgp command line: fingerprint dumps, vocabulary fitting, collision
// studies, GP regression benchmarks and pool-based BO runs. All commands are
// seeded and write machine-readable outputs (CSV tables, a JSON summary and
// a JSON run manifest) into an output directory.
//
// Exit codes: 0 success, 2 usage error, 3 input error, 4 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "molgp/analysis.hpp"
#include "molgp/bo.hpp"
#include "molgp/dataset.hpp"
#include "molgp/fingerprint.hpp"
#include "molgp/gp.hpp"
#include "molgp/hashing.hpp"
#include "molgp/kernel.hpp"
#include "molgp/rng.hpp"
#include "molgp/smiles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolkitVersion = "0.1.0";

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumerical = 4;

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw molgp::DataError("cannot open input file: " + path.string());
  }
  molgp::Fnv1a64 hash;
  char buffer[1 << 14];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash.feed_byte(static_cast<std::uint8_t>(buffer[i]));
    }
  }
  std::ostringstream out;
  out << std::hex << hash.value();
  return out.str();
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw molgp::DataError("cannot write output file: " + path.string());
    }
    out << content;
  }
  fs::rename(tmp, path);
}

class ManifestTimer {
 public:
  ManifestTimer() : start_(std::chrono::steady_clock::now()) {}

  double seconds() const {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double>(elapsed).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

json input_entry(const fs::path& path) {
  return json{{"path", path.string()}, {"fnv1a64", file_digest(path)}};
}

void write_manifest(const fs::path& out_dir, json manifest, const ManifestTimer& timer) {
  manifest["toolkit_version"] = kToolkitVersion;
  manifest["duration_seconds"] = timer.seconds();
  write_text_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

struct EncodingSpec {
  enum class Kind { kExact, kFolded, kSortSlice };
  Kind kind = Kind::kExact;
  int dim = 0;
  fs::path vocab_path;
  std::string text;

  static EncodingSpec parse(const std::string& text) {
    EncodingSpec spec;
    spec.text = text;
    if (text == "exact") {
      spec.kind = Kind::kExact;
      return spec;
    }
    if (text.rfind("folded:", 0) == 0) {
      spec.kind = Kind::kFolded;
      try {
        spec.dim = std::stoi(text.substr(7));
      } catch (const std::exception&) {
        throw CLI::ValidationError("--encoding", "folded dim must be an integer");
      }
      if (spec.dim < 1) {
        throw CLI::ValidationError("--encoding", "folded dim must be >= 1");
      }
      return spec;
    }
    if (text.rfind("sortslice:", 0) == 0) {
      spec.kind = Kind::kSortSlice;
      spec.vocab_path = text.substr(10);
      if (spec.vocab_path.empty()) {
        throw CLI::ValidationError("--encoding", "sortslice needs a vocabulary file");
      }
      return spec;
    }
    throw CLI::ValidationError("--encoding",
                               "expected exact, folded:<dim> or sortslice:<vocabfile>");
  }
};

std::vector<molgp::SparseFingerprint> sparse_fingerprints(const molgp::Dataset& dataset,
                                                          int radius) {
  std::vector<molgp::SparseFingerprint> fps;
  fps.reserve(dataset.records.size());
  for (const auto& record : dataset.records) {
    fps.push_back(molgp::morgan_sparse(molgp::parse_smiles(record.smiles), radius));
  }
  return fps;
}

std::vector<molgp::DenseFingerprint> encode_dense(
    const std::vector<molgp::SparseFingerprint>& fps, const EncodingSpec& spec,
    const molgp::SortSliceVocabulary* vocab) {
  std::vector<molgp::DenseFingerprint> dense;
  dense.reserve(fps.size());
  for (const auto& fp : fps) {
    dense.push_back(spec.kind == EncodingSpec::Kind::kFolded ? molgp::fold(fp, spec.dim)
                                                             : molgp::sortslice_encode(fp, *vocab));
  }
  return dense;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

json stats_json(const molgp::LoadStats& stats) {
  return json{{"rows_read", stats.rows_read},
              {"dropped_missing_target", stats.dropped_missing_target},
              {"dropped_bad_smiles", stats.dropped_bad_smiles},
              {"dropped_malformed_row", stats.dropped_malformed_row},
              {"split_ids_unmatched", stats.split_ids_unmatched}};
}

double sample_sd(const std::vector<double>& values, double mean) {
  if (values.size() < 2) {
    return 0.0;
  }
  double acc = 0.0;
  for (double v : values) {
    acc += (v - mean) * (v - mean);
  }
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

// ---------------------------------------------------------------------------
// fingerprint

int cmd_fingerprint(const fs::path& input, int radius, const EncodingSpec& encoding,
                    const fs::path& out_dir) {
  ManifestTimer timer;
  fs::create_directories(out_dir);
  const molgp::Dataset dataset = molgp::load_smiles_table(input);
  const auto fps = sparse_fingerprints(dataset, radius);

  std::ostringstream dump;
  if (encoding.kind == EncodingSpec::Kind::kExact) {
    for (const auto& fp : fps) {
      dump << molgp::format_fingerprint(fp) << "\n";
    }
  } else {
    std::optional<molgp::SortSliceVocabulary> vocab;
    if (encoding.kind == EncodingSpec::Kind::kSortSlice) {
      vocab = molgp::SortSliceVocabulary::load(encoding.vocab_path);
    }
    for (const auto& dense :
         encode_dense(fps, encoding, vocab ? &*vocab : nullptr)) {
      dump << molgp::format_fingerprint(dense) << "\n";
    }
  }
  write_text_atomic(out_dir / "fingerprints.txt", dump.str());

  json manifest{{"command", "fingerprint"},
                {"config", {{"radius", radius}, {"encoding", encoding.text}}},
                {"inputs", json::array({input_entry(input)})},
                {"records", dataset.records.size()},
                {"warnings", stats_json(dataset.stats)}};
  if (encoding.kind == EncodingSpec::Kind::kSortSlice) {
    manifest["inputs"].push_back(input_entry(encoding.vocab_path));
  }
  write_manifest(out_dir, manifest, timer);
  return 0;
}

// ---------------------------------------------------------------------------
// vocab

int cmd_vocab(const fs::path& input, int radius, int dim, const fs::path& output) {
  ManifestTimer timer;
  if (output.has_parent_path()) {
    fs::create_directories(output.parent_path());
  }
  const molgp::Dataset dataset = molgp::load_smiles_table(input);
  const auto fps = sparse_fingerprints(dataset, radius);
  std::ostringstream description;
  description << input.filename().string() << " n=" << fps.size() << " radius=" << radius;
  const molgp::SortSliceVocabulary vocab =
      molgp::sortslice_fit(fps, dim, description.str());
  vocab.save(output);

  json manifest{{"command", "vocab"},
                {"config", {{"radius", radius}, {"dim", dim}, {"output", output.string()}}},
                {"inputs", json::array({input_entry(input)})},
                {"effective_dim", vocab.dim()},
                {"warnings", stats_json(dataset.stats)},
                {"toolkit_version", kToolkitVersion},
                {"duration_seconds", timer.seconds()}};
  write_text_atomic(output.string() + ".manifest.json", manifest.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// collisions

int cmd_collisions(const fs::path& input, const std::vector<int>& dims, int pairs,
                   std::uint64_t seed, int radius, bool per_pair, const fs::path& out_dir) {
  ManifestTimer timer;
  fs::create_directories(out_dir);
  const molgp::Dataset dataset = molgp::load_smiles_table(input);
  std::vector<molgp::MolGraph> mols;
  mols.reserve(dataset.records.size());
  for (const auto& record : dataset.records) {
    mols.push_back(molgp::parse_smiles(record.smiles));
  }
  if (mols.size() < 2) {
    throw molgp::DataError("collision study needs at least two molecules");
  }

  // each pair: two distinct indices from the pinned generator
  molgp::Rng rng(seed);
  std::vector<molgp::MoleculePair> pair_views;
  pair_views.reserve(pairs);
  for (int p = 0; p < pairs; ++p) {
    const std::uint64_t i = rng.below(mols.size());
    std::uint64_t j = rng.below(mols.size() - 1);
    if (j >= i) {
      ++j;
    }
    pair_views.emplace_back(&mols[i], &mols[j]);
  }

  std::vector<molgp::PairObservation> detail;
  const auto reports =
      molgp::collision_study(pair_views, dims, radius, per_pair ? &detail : nullptr);

  std::ostringstream csv;
  csv << "dim,mean_pairwise_collisions,mean_exact_tanimoto,mean_folded_tanimoto,"
         "mean_overestimation,pair_count\n";
  for (const auto& report : reports) {
    csv << report.dim << ',' << format_double(report.mean_pairwise_collisions) << ','
        << format_double(report.mean_exact_tanimoto) << ','
        << format_double(report.mean_folded_tanimoto) << ','
        << format_double(report.mean_overestimation) << ',' << report.pair_count << "\n";
  }
  write_text_atomic(out_dir / "collisions.csv", csv.str());

  if (per_pair) {
    std::ostringstream pair_csv;
    pair_csv << "pair,dim,collisions,exact_tanimoto,folded_tanimoto\n";
    for (const auto& row : detail) {
      pair_csv << row.pair_index << ',' << row.dim << ',' << row.collisions << ','
               << format_double(row.exact_tanimoto) << ',' << format_double(row.folded_tanimoto)
               << "\n";
    }
    write_text_atomic(out_dir / "pairs.csv", pair_csv.str());
  }

  json manifest{{"command", "collisions"},
                {"config",
                 {{"dims", dims}, {"pairs", pairs}, {"seed", seed}, {"radius", radius},
                  {"per_pair", per_pair}}},
                {"inputs", json::array({input_entry(input)})},
                {"molecules", mols.size()},
                {"warnings", stats_json(dataset.stats)}};
  write_manifest(out_dir, manifest, timer);
  return 0;
}

// ---------------------------------------------------------------------------
// regress

struct RegressOptions {
  fs::path train_path;
  fs::path test_path;
  fs::path input_path;
  fs::path split_path;
  std::string target;
  EncodingSpec encoding;
  int radius = 2;
  std::string hyper_mode = "fixed";
  int trials = 10;
  int train_size = 10000;
  int test_size = 0;  // 0 = full test set
  std::uint64_t seed = 0;
  fs::path out_dir;
};

Eigen::VectorXd targets_of(const molgp::Dataset& dataset, const std::vector<int>& indices) {
  Eigen::VectorXd y(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    y[i] = dataset.records[indices[i]].targets.at(dataset.target_name);
  }
  return y;
}

template <typename Fp>
std::vector<Fp> select(const std::vector<Fp>& fps, const std::vector<int>& indices) {
  std::vector<Fp> out;
  out.reserve(indices.size());
  for (int index : indices) {
    out.push_back(fps[index]);
  }
  return out;
}

template <typename Fp>
json run_regression_trial(const std::vector<Fp>& train_fps, const Eigen::VectorXd& y_train,
                          const std::vector<Fp>& test_fps, const Eigen::VectorXd& y_test,
                          const std::string& hyper_mode) {
  molgp::GpHyperparams h = molgp::default_hyperparams(y_train);
  json trial;
  trial["fixed_hyperparams"] = {{"amplitude_sq", h.amplitude_sq},
                                {"noise_sq", h.noise_sq},
                                {"mean_const", h.mean_const}};
  if (hyper_mode == "optimized") {
    const molgp::OptimizeReport report = molgp::optimize_hyperparams(
        std::span<const Fp>(train_fps), y_train, h, molgp::OptimizerConfig{});
    h = report.hyper;
    trial["optimizer"] = {{"iterations", report.iterations},
                          {"final_mll", report.final_mll},
                          {"final_grad_norm", report.final_grad_norm},
                          {"fell_back_to_init", report.fell_back_to_init}};
    trial["hyperparams"] = {{"amplitude_sq", h.amplitude_sq},
                            {"noise_sq", h.noise_sq},
                            {"mean_const", h.mean_const}};
  }
  const molgp::GpModel model = molgp::fit(train_fps, y_train, h);
  const molgp::Prediction prediction = molgp::predict(model, std::span<const Fp>(test_fps));
  const molgp::RegressionMetrics metrics = molgp::regression_metrics(y_test, prediction.mean);
  trial["r2"] = metrics.r2;
  trial["mse"] = metrics.mse;
  trial["mae"] = metrics.mae;
  return trial;
}

int cmd_regress(const RegressOptions& options) {
  ManifestTimer timer;
  fs::create_directories(options.out_dir);

  molgp::Dataset train;
  molgp::Dataset test;
  json inputs = json::array();
  if (!options.train_path.empty()) {
    train = molgp::load_dataset(options.train_path, options.target);
    test = molgp::load_dataset(options.test_path, options.target);
    inputs.push_back(input_entry(options.train_path));
    inputs.push_back(input_entry(options.test_path));
  } else {
    const molgp::Dataset full = molgp::load_dataset(options.input_path, options.target);
    const molgp::Dataset labelled = molgp::apply_split(full, options.split_path);
    inputs.push_back(input_entry(options.input_path));
    inputs.push_back(input_entry(options.split_path));
    train.target_name = test.target_name = labelled.target_name;
    train.stats = labelled.stats;
    for (const auto& record : labelled.records) {
      (record.split == molgp::SplitLabel::kTrain ? train : test).records.push_back(record);
    }
    if (train.records.empty() || test.records.empty()) {
      throw molgp::DataError("split produced an empty train or test partition");
    }
  }

  const auto train_sparse = sparse_fingerprints(train, options.radius);
  const auto test_sparse = sparse_fingerprints(test, options.radius);
  std::optional<molgp::SortSliceVocabulary> vocab;
  if (options.encoding.kind == EncodingSpec::Kind::kSortSlice) {
    vocab = molgp::SortSliceVocabulary::load(options.encoding.vocab_path);
  }

  std::vector<int> train_indices(train.records.size());
  for (std::size_t i = 0; i < train_indices.size(); ++i) train_indices[i] = static_cast<int>(i);
  std::vector<int> test_indices(test.records.size());
  for (std::size_t i = 0; i < test_indices.size(); ++i) test_indices[i] = static_cast<int>(i);

  const int per_trial_train =
      std::min<int>(options.train_size, static_cast<int>(train.records.size()));

  json trials_json = json::array();
  std::vector<double> r2s, mses, maes;
  std::ostringstream csv;
  csv << "trial,r2,mse,mae\n";
  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = molgp::derive_seed(options.seed, t);
    const std::vector<int> train_pick = molgp::subsample(train_indices, per_trial_train, trial_seed);
    std::vector<int> test_pick = test_indices;
    if (options.test_size > 0 && options.test_size < static_cast<int>(test_indices.size())) {
      test_pick = molgp::subsample(test_indices, options.test_size,
                                   molgp::derive_seed(trial_seed, 1));
    }
    const Eigen::VectorXd y_train = targets_of(train, train_pick);
    const Eigen::VectorXd y_test = targets_of(test, test_pick);

    json trial;
    if (options.encoding.kind == EncodingSpec::Kind::kExact) {
      trial = run_regression_trial(select(train_sparse, train_pick), y_train,
                                   select(test_sparse, test_pick), y_test, options.hyper_mode);
    } else {
      const auto train_dense =
          encode_dense(select(train_sparse, train_pick), options.encoding, vocab ? &*vocab : nullptr);
      const auto test_dense =
          encode_dense(select(test_sparse, test_pick), options.encoding, vocab ? &*vocab : nullptr);
      trial = run_regression_trial(train_dense, y_train, test_dense, y_test, options.hyper_mode);
    }
    trial["trial"] = t;
    trial["seed"] = trial_seed;
    trial["train_size"] = per_trial_train;
    trial["test_size"] = test_pick.size();
    csv << t << ',' << format_double(trial["r2"].get<double>()) << ','
        << format_double(trial["mse"].get<double>()) << ','
        << format_double(trial["mae"].get<double>()) << "\n";
    r2s.push_back(trial["r2"].get<double>());
    mses.push_back(trial["mse"].get<double>());
    maes.push_back(trial["mae"].get<double>());
    trials_json.push_back(std::move(trial));
  }

  auto mean_of = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
  };
  const double r2_mean = mean_of(r2s);
  const double mse_mean = mean_of(mses);
  const double mae_mean = mean_of(maes);
  csv << "mean," << format_double(r2_mean) << ',' << format_double(mse_mean) << ','
      << format_double(mae_mean) << "\n";
  csv << "sd," << format_double(sample_sd(r2s, r2_mean)) << ','
      << format_double(sample_sd(mses, mse_mean)) << ','
      << format_double(sample_sd(maes, mae_mean)) << "\n";
  write_text_atomic(options.out_dir / "metrics.csv", csv.str());

  json summary{{"trials", trials_json},
               {"mean", {{"r2", r2_mean}, {"mse", mse_mean}, {"mae", mae_mean}}},
               {"sd",
                {{"r2", sample_sd(r2s, r2_mean)},
                 {"mse", sample_sd(mses, mse_mean)},
                 {"mae", sample_sd(maes, mae_mean)}}}};
  write_text_atomic(options.out_dir / "summary.json", summary.dump(2) + "\n");

  json manifest{{"command", "regress"},
                {"config",
                 {{"target", options.target},
                  {"encoding", options.encoding.text},
                  {"radius", options.radius},
                  {"hyper", options.hyper_mode},
                  {"trials", options.trials},
                  {"train_size", options.train_size},
                  {"test_size", options.test_size},
                  {"seed", options.seed}}},
                {"inputs", inputs},
                {"per_trial", trials_json},
                {"warnings", stats_json(train.stats)}};
  write_manifest(options.out_dir, manifest, timer);
  return 0;
}

// ---------------------------------------------------------------------------
// bo

struct BoOptions {
  fs::path input_path;
  std::string target;
  EncodingSpec encoding;
  int radius = 2;
  std::string direction = "min";
  int budget = 1000;
  int init_size = 1000;
  double init_fraction = 0.8;
  int trials = 5;
  bool refit_hyper = false;
  std::uint64_t seed = 0;
  fs::path out_dir;
};

template <typename Fp>
molgp::BoTrajectory run_bo_trial(const std::vector<Fp>& fps, const Eigen::VectorXd& values,
                                 const molgp::BoConfig& cfg) {
  // fixed hyperparameters from the targets of the (deterministically
  // replayed) initial design
  const std::vector<int> eligible = molgp::bottom_fraction(
      std::span<const double>(values.data(), values.size()), cfg.init_percentile, cfg.direction);
  const std::vector<int> init = molgp::subsample(eligible, cfg.init_size, cfg.seed);
  Eigen::VectorXd y_init(init.size());
  for (std::size_t i = 0; i < init.size(); ++i) {
    y_init[i] = values[init[i]];
  }
  const molgp::GpHyperparams h = molgp::default_hyperparams(y_init);
  return molgp::run_bo(std::span<const Fp>(fps), values, cfg, h);
}

int cmd_bo(const BoOptions& options) {
  ManifestTimer timer;
  fs::create_directories(options.out_dir);
  const molgp::Dataset pool = molgp::load_dataset(options.input_path, options.target);
  const auto sparse = sparse_fingerprints(pool, options.radius);
  std::optional<molgp::SortSliceVocabulary> vocab;
  if (options.encoding.kind == EncodingSpec::Kind::kSortSlice) {
    vocab = molgp::SortSliceVocabulary::load(options.encoding.vocab_path);
  }
  std::vector<molgp::DenseFingerprint> dense;
  if (options.encoding.kind != EncodingSpec::Kind::kExact) {
    dense = encode_dense(sparse, options.encoding, vocab ? &*vocab : nullptr);
  }

  Eigen::VectorXd values(pool.records.size());
  for (std::size_t i = 0; i < pool.records.size(); ++i) {
    values[i] = pool.records[i].targets.at(pool.target_name);
  }

  molgp::BoConfig cfg;
  cfg.budget = options.budget;
  cfg.init_size = options.init_size;
  cfg.init_percentile = options.init_fraction;
  cfg.refit_hyperparams = options.refit_hyper;
  cfg.direction =
      options.direction == "max" ? molgp::Direction::kMaximize : molgp::Direction::kMinimize;

  std::vector<double> aucs;
  json trials_json = json::array();
  for (int t = 0; t < options.trials; ++t) {
    cfg.seed = molgp::derive_seed(options.seed, t);
    const molgp::BoTrajectory trajectory =
        options.encoding.kind == EncodingSpec::Kind::kExact
            ? run_bo_trial(sparse, values, cfg)
            : run_bo_trial(dense, values, cfg);

    std::ostringstream csv;
    csv << "iteration,acquired_index,observed_value,best_so_far\n";
    for (std::size_t i = 0; i < trajectory.acquired.size(); ++i) {
      const auto& acquisition = trajectory.acquired[i];
      csv << acquisition.iteration << ',' << acquisition.pool_index << ','
          << format_double(acquisition.observed_value) << ','
          << format_double(trajectory.best_curve[i]) << "\n";
    }
    write_text_atomic(options.out_dir / ("trajectory_" + std::to_string(t) + ".csv"), csv.str());

    aucs.push_back(trajectory.auc);
    trials_json.push_back(json{{"trial", t},
                               {"seed", cfg.seed},
                               {"auc", trajectory.auc},
                               {"best_final", trajectory.best_curve.back()},
                               {"initial_size", trajectory.initial_indices.size()}});
  }

  double auc_mean = 0.0;
  for (double a : aucs) auc_mean += a;
  auc_mean /= static_cast<double>(aucs.size());

  json summary{{"auc", {{"mean", auc_mean}, {"sd", sample_sd(aucs, auc_mean)}}},
               {"trials", trials_json},
               {"config",
                {{"target", options.target},
                 {"encoding", options.encoding.text},
                 {"radius", options.radius},
                 {"direction", options.direction},
                 {"budget", options.budget},
                 {"init_size", options.init_size},
                 {"init_fraction", options.init_fraction},
                 {"refit_hyper", options.refit_hyper},
                 {"trials", options.trials},
                 {"seed", options.seed}}}};
  write_text_atomic(options.out_dir / "summary.json", summary.dump(2) + "\n");

  json manifest{{"command", "bo"},
                {"config", summary["config"]},
                {"inputs", json::array({input_entry(options.input_path)})},
                {"pool_size", pool.records.size()},
                {"warnings", stats_json(pool.stats)}};
  write_manifest(options.out_dir, manifest, timer);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"molecular fingerprints, Tanimoto-kernel GP regression and BO experiments"};
  app.require_subcommand(1);

  std::string encoding_text = "exact";
  int radius = 2;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  // fingerprint
  auto* fingerprint = app.add_subcommand("fingerprint", "write a fingerprint dump");
  std::string fp_input;
  fingerprint->add_option("--input", fp_input, "SMILES table or list")->required();
  fingerprint->add_option("--radius", radius, "Morgan radius")->capture_default_str();
  fingerprint->add_option("--encoding", encoding_text,
                          "exact | folded:<dim> | sortslice:<vocabfile>")
      ->capture_default_str();
  fingerprint->add_option("--output-dir", output_dir)->capture_default_str();

  // vocab
  auto* vocab = app.add_subcommand("vocab", "fit and save a Sort&Slice vocabulary");
  std::string vocab_input;
  std::string vocab_output = "vocab.txt";
  int vocab_dim = 1024;
  vocab->add_option("--input", vocab_input, "SMILES table or list")->required();
  vocab->add_option("--radius", radius)->capture_default_str();
  vocab->add_option("--dim", vocab_dim)->capture_default_str();
  vocab->add_option("--output", vocab_output)->capture_default_str();

  // collisions
  auto* collisions = app.add_subcommand("collisions", "collision and overestimation study");
  std::string col_input;
  std::vector<int> col_dims = {512, 1024, 2048, 4096};
  int col_pairs = 10000;
  bool col_per_pair = false;
  collisions->add_option("--input", col_input)->required();
  collisions->add_option("--dims", col_dims, "fold dims")->capture_default_str();
  collisions->add_option("--pairs", col_pairs)->capture_default_str();
  collisions->add_option("--seed", seed)->capture_default_str();
  collisions->add_option("--radius", radius)->capture_default_str();
  collisions->add_flag("--per-pair", col_per_pair, "also write per-pair rows");
  collisions->add_option("--output-dir", output_dir)->capture_default_str();

  // regress
  auto* regress = app.add_subcommand("regress", "GP regression benchmark");
  RegressOptions regress_options;
  std::string regress_encoding = "exact";
  regress->add_option("--train", regress_options.train_path, "training table");
  regress->add_option("--test", regress_options.test_path, "test table");
  regress->add_option("--input", regress_options.input_path, "single table used with --split");
  regress->add_option("--split", regress_options.split_path, "record_id,(train|test) file");
  regress->add_option("--target", regress_options.target)->required();
  regress->add_option("--encoding", regress_encoding)->capture_default_str();
  regress->add_option("--radius", regress_options.radius)->capture_default_str();
  regress->add_option("--hyper", regress_options.hyper_mode, "fixed | optimized")
      ->check(CLI::IsMember({"fixed", "optimized"}))
      ->capture_default_str();
  regress->add_option("--trials", regress_options.trials)->capture_default_str();
  regress->add_option("--train-size", regress_options.train_size, "per-trial subsample")
      ->capture_default_str();
  regress->add_option("--test-size", regress_options.test_size, "0 = full test set")
      ->capture_default_str();
  regress->add_option("--seed", regress_options.seed)->capture_default_str();
  regress->add_option("--output-dir", regress_options.out_dir)->required();

  // bo
  auto* bo = app.add_subcommand("bo", "pool-based Bayesian optimization");
  BoOptions bo_options;
  std::string bo_encoding = "exact";
  bo->add_option("--input", bo_options.input_path, "pool table")->required();
  bo->add_option("--target", bo_options.target)->required();
  bo->add_option("--encoding", bo_encoding)->capture_default_str();
  bo->add_option("--radius", bo_options.radius)->capture_default_str();
  bo->add_option("--direction", bo_options.direction, "min | max")
      ->check(CLI::IsMember({"min", "max"}))
      ->capture_default_str();
  bo->add_option("--budget", bo_options.budget)->capture_default_str();
  bo->add_option("--init-size", bo_options.init_size)->capture_default_str();
  bo->add_option("--init-fraction", bo_options.init_fraction)->capture_default_str();
  bo->add_option("--trials", bo_options.trials)->capture_default_str();
  bo->add_flag("--refit-hyper", bo_options.refit_hyper, "re-optimize hyperparameters per iteration");
  bo->add_option("--seed", bo_options.seed)->capture_default_str();
  bo->add_option("--output-dir", bo_options.out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fingerprint) {
      return cmd_fingerprint(fp_input, radius, EncodingSpec::parse(encoding_text), output_dir);
    }
    if (*vocab) {
      return cmd_vocab(vocab_input, radius, vocab_dim, vocab_output);
    }
    if (*collisions) {
      return cmd_collisions(col_input, col_dims, col_pairs, seed, radius, col_per_pair,
                            output_dir);
    }
    if (*regress) {
      const bool pair_mode = !regress_options.train_path.empty();
      const bool split_mode = !regress_options.input_path.empty();
      if (pair_mode == split_mode || (pair_mode && regress_options.test_path.empty()) ||
          (split_mode && regress_options.split_path.empty())) {
        std::cerr << "regress needs either --train/--test or --input/--split\n";
        return kExitUsage;
      }
      regress_options.encoding = EncodingSpec::parse(regress_encoding);
      return cmd_regress(regress_options);
    }
    if (*bo) {
      bo_options.encoding = EncodingSpec::parse(bo_encoding);
      return cmd_bo(bo_options);
    }
  } catch (const CLI::ValidationError& error) {
    std::cerr << error.what() << "\n";
    return kExitUsage;
  } catch (const molgp::DataError& error) {
    std::cerr << "input error: " << error.what() << "\n";
    return kExitInput;
  } catch (const molgp::SmilesError& error) {
    std::cerr << "input error: " << error.what() << "\n";
    return kExitInput;
  } catch (const molgp::NumericalError& error) {
    std::cerr << "numerical error: " << error.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& error) {
    std::cerr << "usage error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
