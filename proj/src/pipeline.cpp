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


#include "fcwr/pipeline.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fcwr/detail/csv.hpp"
#include "fcwr/error.hpp"
#include "fcwr/noise.hpp"
#include "fcwr/random.hpp"
#include "json.hpp"

namespace fcwr {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json to_json(const FeatureConfig& c) {
  return {{"frame_ms", c.frame.frame_ms},
          {"shift_ms", c.frame.shift_ms},
          {"fft_size", c.frame.fft_size},
          {"preemphasis_coeff", c.frame.preemphasis_coeff},
          {"window", to_string(c.frame.window)},
          {"num_filters", c.num_filters},
          {"f_min_hz", c.f_min_hz},
          {"f_max_hz", c.f_max_hz},
          {"features", to_string(c.features)},
          {"fc_use_power", c.fc_use_power},
          {"fc_preemphasized", c.fc_preemphasized},
          {"log_floor", c.log_floor}};
}

FeatureConfig feature_config_from_json(const json& j) {
  FeatureConfig c;
  c.frame.frame_ms = j.at("frame_ms").get<double>();
  c.frame.shift_ms = j.at("shift_ms").get<double>();
  c.frame.fft_size = j.at("fft_size").get<std::size_t>();
  c.frame.preemphasis_coeff = j.at("preemphasis_coeff").get<double>();
  c.frame.window = parse_window(j.at("window").get<std::string>());
  c.num_filters = j.at("num_filters").get<int>();
  c.f_min_hz = j.at("f_min_hz").get<double>();
  c.f_max_hz = j.at("f_max_hz").get<double>();
  c.features = parse_feature_set(j.at("features").get<std::string>());
  c.fc_use_power = j.at("fc_use_power").get<bool>();
  c.fc_preemphasized = j.at("fc_preemphasized").get<bool>();
  c.log_floor = j.at("log_floor").get<double>();
  return c;
}

json to_json(const CnnConfig& c) {
  return {{"height", c.height},         {"width", c.width}, {"channels", c.channels},
          {"conv1_filters", c.conv1_filters}, {"conv2_filters", c.conv2_filters}, {"kernel", c.kernel},
          {"pool", c.pool},             {"num_classes", c.num_classes}, {"seed", c.seed}};
}

json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs}, {"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
          {"optimizer", "adam"}, {"beta1", c.beta1},           {"beta2", c.beta2},
          {"epsilon", c.epsilon}, {"loss", "cross_entropy"},   {"shuffle_seed", c.seed}};
}

json to_json(const EvalReport& r) { return {{"condition", r.condition}, {"accuracy", r.accuracy()}, {"confusion", r.confusion}}; }

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptFile, path.string() + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

ExtractSummary run_extract(const ExtractOptions& opts) {
  const auto manifest = load_manifest(opts.manifest, opts.vocabulary);
  const FeatureExtractor extractor(opts.features, kSampleRateHz);
  const fs::path tensor_dir = opts.out_dir / "tensors";
  fs::create_directories(tensor_dir);

  std::map<std::string, StatsAccumulator> stats;
  std::vector<std::string> failures;
  ErrorCode first_code = ErrorCode::Io;
  std::ostringstream index;
  index << "file,word,accent,split,source\n";
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& rec = manifest.records[i];
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.fcf", i);
    try {
      const auto tensor = extractor.extract(load_wav(rec.path));
      write_features(tensor_dir / name, tensor);
      if (rec.split == Split::train) stats[rec.accent].add(tensor);
    } catch (const Error& e) {
      if (failures.empty()) first_code = e.code();
      failures.push_back("row " + std::to_string(rec.row) + " (" + rec.path.string() + "): " + e.what());
      continue;
    }
    index << detail::quote_csv_field((fs::path("tensors") / name).generic_string()) << ','
          << detail::quote_csv_field(rec.word) << ',' << detail::quote_csv_field(rec.accent) << ','
          << to_string(rec.split) << ',' << detail::quote_csv_field(fs::absolute(rec.path).string()) << '\n';
  }
  if (!failures.empty()) {
    std::string msg = std::to_string(failures.size()) + " utterance(s) failed:";
    for (const auto& f : failures) msg += "\n  " + f;
    throw Error(first_code, msg);
  }

  {
    std::ofstream out(opts.out_dir / "index.csv");
    if (!out) throw Error(ErrorCode::Io, "cannot write index.csv");
    out << index.str();
  }

  json stats_json = json::object();
  for (const auto& [accent, acc] : stats) {
    json channels = json::array();
    for (const auto& s : acc.finish()) channels.push_back({{"mean", s.mean}, {"stddev", s.stddev}});
    stats_json[accent] = channels;
  }
  const json run = {
      {"tool", "fcwr"},
      {"tool_version", kToolVersion},
      {"command", "extract"},
      {"manifest", fs::absolute(opts.manifest).string()},
      {"feature_config", to_json(opts.features)},
      {"tensor_shape", {kTensorRows, kTensorCols, channel_count(opts.features.features)}},
      {"vocabulary", manifest.vocabulary},
      {"accents", manifest.accents},
      {"files", manifest.records.size()},
      {"normalization", stats_json},
  };
  ExtractSummary summary;
  summary.files = manifest.records.size();
  summary.run_manifest = opts.out_dir / "extract.json";
  write_json(summary.run_manifest, run);
  return summary;
}

FeatureStore FeatureStore::open(const fs::path& dir) {
  FeatureStore store;
  store.dir = dir;
  const json run = read_json(dir / "extract.json");
  try {
    store.config = feature_config_from_json(run.at("feature_config"));
    store.vocabulary = run.at("vocabulary").get<std::vector<std::string>>();
    for (const auto& [accent, channels] : run.at("normalization").items()) {
      auto& v = store.stats[accent];
      for (const auto& c : channels) v.push_back({c.at("mean").get<double>(), c.at("stddev").get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptFile, (dir / "extract.json").string() + ": " + e.what());
  }

  std::ifstream in(dir / "index.csv");
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + (dir / "index.csv").string());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 5) throw Error(ErrorCode::CorruptFile, "index.csv: malformed row '" + line + "'");
    store.entries.push_back({dir / f[0], f[4], f[1], f[2], parse_split(f[3])});
  }
  return store;
}

std::vector<const FeatureEntry*> FeatureStore::select(const std::string& accent, Split split) const {
  std::vector<const FeatureEntry*> out;
  for (const auto& e : entries) {
    if (e.accent == accent && e.split == split) out.push_back(&e);
  }
  return out;
}

int FeatureStore::label(const std::string& word) const {
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    if (vocabulary[i] == word) return static_cast<int>(i);
  }
  throw Error(ErrorCode::UnknownWord, "word '" + word + "' is not in the vocabulary");
}

const std::vector<ChannelStats>& FeatureStore::stats_for(const std::string& accent) const {
  const auto it = stats.find(accent);
  if (it == stats.end()) {
    throw Error(ErrorCode::EmptyDataset, "no training statistics for accent '" + accent + "'");
  }
  return it->second;
}

TrainSummary run_train(const TrainOptions& opts, const EpochCallback& on_epoch) {
  const auto store = FeatureStore::open(opts.features_dir);
  const auto entries = store.select(opts.accent, Split::train);
  if (entries.empty()) {
    throw Error(ErrorCode::EmptyDataset, "accent '" + opts.accent + "' has no training records in " +
                                             opts.features_dir.string());
  }
  const auto& stats = store.stats_for(opts.accent);

  std::vector<FeatureTensor> tensors;
  tensors.reserve(entries.size());
  for (const auto* e : entries) tensors.push_back(normalize_tensor(read_features(e->file), stats));
  std::vector<Example> examples;
  for (std::size_t i = 0; i < entries.size(); ++i) examples.push_back({&tensors[i], store.label(entries[i]->word)});

  CnnConfig cnn;
  cnn.height = tensors.front().rows();
  cnn.width = tensors.front().cols();
  cnn.channels = tensors.front().channels();
  cnn.num_classes = store.vocabulary.size();
  cnn.seed = opts.train.seed;
  TrainConfig tc = opts.train;
  tc.seed = mix_seed(opts.train.seed, 1);

  auto result = train(CnnModel(cnn), examples, tc, on_epoch);

  fs::create_directories(opts.out_dir);
  TrainSummary summary;
  summary.checkpoint = opts.out_dir / "model.fcm";
  summary.run_manifest = opts.out_dir / "run_manifest.json";
  summary.loss_history = opts.out_dir / "loss_history.csv";
  summary.losses = result.loss_history;
  save_model(summary.checkpoint, result.model);
  {
    std::ofstream out(summary.loss_history);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + summary.loss_history.string());
    out << "epoch,loss\n";
    for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
      out << e + 1 << ',' << format_double(result.loss_history[e]) << '\n';
    }
  }
  summary.train_accuracy = evaluate(result.model, examples, "train").accuracy();

  const json run = {
      {"tool", "fcwr"},
      {"tool_version", kToolVersion},
      {"command", "train"},
      {"accent", opts.accent},
      {"features", feature_label(store.config.features)},
      {"features_dir", fs::absolute(opts.features_dir).string()},
      {"extract_manifest", fs::absolute(store.run_manifest()).string()},
      {"feature_config", to_json(store.config)},
      {"vocabulary", store.vocabulary},
      {"cnn_config", to_json(cnn)},
      {"train_config", to_json(tc)},
      {"seed", opts.train.seed},
      {"training_examples", examples.size()},
      {"train_accuracy", summary.train_accuracy},
      {"final_loss", result.loss_history.empty() ? json(nullptr) : json(result.loss_history.back())},
      {"artifacts",
       {{"checkpoint", fs::absolute(summary.checkpoint).string()},
        {"loss_history", fs::absolute(summary.loss_history).string()}}},
  };
  write_json(summary.run_manifest, run);
  return summary;
}

std::string format_result_row(const ResultRow& row) {
  return detail::quote_csv_field(row.accent) + ',' + detail::quote_csv_field(row.features) + ',' +
         detail::quote_csv_field(row.noise) + ',' + (row.snr_db ? format_double(*row.snr_db) : "clean") + ',' +
         format_double(row.report.accuracy());
}

std::vector<ResultRow> run_eval(const EvalOptions& opts) {
  const auto model = load_model(opts.checkpoint);
  const auto store = FeatureStore::open(opts.features_dir);

  const fs::path run_path = opts.checkpoint.parent_path() / "run_manifest.json";
  json train_run = fs::exists(run_path) ? read_json(run_path) : json::object();
  std::string accent;
  if (opts.accent) {
    accent = *opts.accent;
  } else if (train_run.contains("accent")) {
    accent = train_run["accent"].get<std::string>();
  } else {
    throw Error(ErrorCode::InvalidConfig, "no accent given and no run_manifest.json next to the checkpoint");
  }

  const auto& mc = model.config();
  const std::size_t channels = channel_count(store.config.features);
  if (mc.channels != channels || mc.height != kTensorRows || mc.width != kTensorCols ||
      mc.num_classes != store.vocabulary.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                "checkpoint expects " + std::to_string(mc.height) + "x" + std::to_string(mc.width) + "x" +
                    std::to_string(mc.channels) + " inputs and " + std::to_string(mc.num_classes) +
                    " classes; features are " + std::to_string(kTensorRows) + "x" + std::to_string(kTensorCols) +
                    "x" + std::to_string(channels) + " with " + std::to_string(store.vocabulary.size()) + " words");
  }

  const auto entries = store.select(accent, Split::test);
  if (entries.empty()) throw Error(ErrorCode::EmptyDataset, "accent '" + accent + "' has no test records");
  const auto& stats = store.stats_for(accent);
  std::vector<int> truth;
  for (const auto* e : entries) truth.push_back(store.label(e->word));

  const std::string features = feature_label(store.config.features);
  std::vector<ResultRow> rows;
  if (opts.noise == "none") {
    std::vector<int> predicted;
    for (const auto* e : entries) predicted.push_back(predict(model, normalize_tensor(read_features(e->file), stats)));
    rows.push_back({accent, features, "none", std::nullopt,
                    report_from_predictions(mc.num_classes, truth, predicted, "clean")});
  } else {
    const FeatureExtractor extractor(store.config, kSampleRateHz);
    std::vector<AudioBuffer> clean;
    for (const auto* e : entries) clean.push_back(load_wav(e->source));
    for (double snr : opts.snr_grid) {
      std::vector<int> predicted;
      std::string label;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto spec = make_noise_spec(opts.noise, snr, mix_seed(opts.seed, i));
        label = spec.label();
        const auto noisy = mix_at_snr(clean[i], spec);
        predicted.push_back(predict(model, normalize_tensor(extractor.extract(noisy), stats)));
      }
      rows.push_back({accent, features, label, snr,
                      report_from_predictions(mc.num_classes, truth, predicted,
                                              label + "@" + format_double(snr) + "dB")});
    }
  }

  const bool fresh = !fs::exists(opts.results_csv) || fs::file_size(opts.results_csv) == 0;
  if (opts.results_csv.has_parent_path()) fs::create_directories(opts.results_csv.parent_path());
  {
    std::ofstream out(opts.results_csv, std::ios::app);
    if (!out) throw Error(ErrorCode::Io, "cannot append to " + opts.results_csv.string());
    if (fresh) out << kResultsHeader << '\n';
    for (const auto& r : rows) out << format_result_row(r) << '\n';
  }

  json conditions = json::array();
  for (const auto& r : rows) conditions.push_back(to_json(r.report));
  const std::string noise_tag = rows.front().noise;
  const fs::path report_path =
      opts.report_json.value_or(opts.checkpoint.parent_path() / ("eval_" + features + "_" + noise_tag + ".json"));
  const json report = {
      {"tool", "fcwr"},
      {"tool_version", kToolVersion},
      {"command", "eval"},
      {"accent", accent},
      {"features", features},
      {"noise", opts.noise},
      {"seed", opts.seed},
      {"checkpoint", fs::absolute(opts.checkpoint).string()},
      {"run_manifest", fs::exists(run_path) ? json(fs::absolute(run_path).string()) : json(nullptr)},
      {"extract_manifest", fs::absolute(store.run_manifest()).string()},
      {"vocabulary", store.vocabulary},
      {"results_csv", fs::absolute(opts.results_csv).string()},
      {"conditions", conditions},
  };
  write_json(report_path, report);
  return rows;
}

std::vector<ResultRecord> read_results(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + csv.string());
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw Error(ErrorCode::CorruptFile, csv.string() + ": header must be '" + std::string(kResultsHeader) + "'");
  }
  std::vector<ResultRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 5) throw Error(ErrorCode::CorruptFile, csv.string() + ": malformed row '" + line + "'");
    ResultRecord r{f[0], f[1], f[2], std::nullopt, 0.0};
    try {
      if (f[3] != "clean") r.snr_db = std::stod(f[3]);
      r.accuracy = std::stod(f[4]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::CorruptFile, csv.string() + ": non-numeric value in '" + line + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fcwr
