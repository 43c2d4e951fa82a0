// Copyright 2026 The fcwr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// End-to-end workflow behind the command-line tool: feature extraction over a
// dataset manifest, per-accent training, and clean / noisy evaluation.
//
// A features directory produced by run_extract contains
//   extract.json   extraction config, vocabulary and per-accent statistics
//   index.csv      file,word,accent,split,source
//   tensors/       one FCF1 file per utterance (raw, un-normalized)

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcwr/audio_io.hpp"
#include "fcwr/cnn.hpp"
#include "fcwr/features.hpp"

namespace fcwr {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExtractOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  FeatureConfig features;
  std::optional<std::vector<std::string>> vocabulary;
};

struct ExtractSummary {
  std::size_t files = 0;
  std::filesystem::path run_manifest;
};

/// Throws Error on manifest problems or, after visiting every row, with one
/// diagnostic line per utterance that failed.
ExtractSummary run_extract(const ExtractOptions& opts);

struct FeatureEntry {
  std::filesystem::path file;    // tensor file
  std::filesystem::path source;  // original WAV
  std::string word;
  std::string accent;
  Split split = Split::train;
};

/// Read-only view of an extracted features directory.
struct FeatureStore {
  std::filesystem::path dir;
  FeatureConfig config;
  std::vector<std::string> vocabulary;
  std::map<std::string, std::vector<ChannelStats>> stats;  // per accent
  std::vector<FeatureEntry> entries;

  static FeatureStore open(const std::filesystem::path& dir);

  std::filesystem::path run_manifest() const { return dir / "extract.json"; }
  std::vector<const FeatureEntry*> select(const std::string& accent, Split split) const;
  int label(const std::string& word) const;
  const std::vector<ChannelStats>& stats_for(const std::string& accent) const;
};

struct TrainOptions {
  std::filesystem::path features_dir;
  std::string accent;
  std::filesystem::path out_dir;
  TrainConfig train;
};

struct TrainSummary {
  std::filesystem::path checkpoint;
  std::filesystem::path run_manifest;
  std::filesystem::path loss_history;
  std::vector<double> losses;
  double train_accuracy = 0.0;
};

/// Writes model.fcm, run_manifest.json and loss_history.csv into out_dir.
TrainSummary run_train(const TrainOptions& opts, const EpochCallback& on_epoch = {});

struct EvalOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path features_dir;
  std::string noise = "none";  // "none", "white" or a WAV path
  std::vector<double> snr_grid = {0.0, 5.0, 10.0, 15.0, 20.0};
  std::filesystem::path results_csv;
  std::optional<std::filesystem::path> report_json;  // default: next to the checkpoint
  std::optional<std::string> accent;                 // default: from the run manifest
  std::uint64_t seed = 0;
};

struct ResultRow {
  std::string accent;
  std::string features;
  std::string noise;              // "none" for clean speech
  std::optional<double> snr_db;   // empty means clean
  EvalReport report;
};

/// Appends one row per condition to the results CSV
/// (`accent,features,noise,snr_db,accuracy`) and writes a JSON report with the
/// confusion matrices.
std::vector<ResultRow> run_eval(const EvalOptions& opts);

std::string format_result_row(const ResultRow& row);
inline constexpr const char* kResultsHeader = "accent,features,noise,snr_db,accuracy";

struct ResultRecord {
  std::string accent, features, noise;
  std::optional<double> snr_db;
  double accuracy = 0.0;
};

std::vector<ResultRecord> read_results(const std::filesystem::path& csv);

}  // namespace fcwr
