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


#include <fstream>

#include "doctest.h"
#include "fcwr/pipeline.hpp"
#include "fcwr/plot.hpp"
#include "fcwr/synth.hpp"
#include "json.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Toy {
  testutil::TempDir dir{"pipe"};
  fs::path manifest;

  explicit Toy(std::size_t train = 2, std::size_t test = 1) {
    fcwr::SynthCorpusOptions o;
    o.out_dir = dir / "corpus";
    o.train_per_word = train;
    o.test_per_word = test;
    o.seed = 3;
    manifest = fcwr::generate_corpus(o);
  }

  fs::path extract(fcwr::FeatureSet set, const std::string& name) const {
    fcwr::ExtractOptions e;
    e.manifest = manifest;
    e.out_dir = dir / name;
    e.features.features = set;
    fcwr::run_extract(e);
    return e.out_dir;
  }

  fcwr::TrainSummary train(const fs::path& features, const std::string& out, std::size_t epochs,
                           std::uint64_t seed = 1) const {
    fcwr::TrainOptions t;
    t.features_dir = features;
    t.accent = "synthetic";
    t.out_dir = dir / out;
    t.train.epochs = epochs;
    t.train.seed = seed;
    return fcwr::run_train(t);
  }
};

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

}  // namespace

TEST_CASE("synthetic corpus is a balanced manifest") {
  Toy toy(3, 2);
  const auto m = fcwr::load_manifest(toy.manifest);
  CHECK(m.records.size() == 25);
  CHECK(m.vocabulary.size() == 5);
  for (const auto& r : m.records) {
    const auto a = fcwr::load_wav(r.path);
    CHECK(a.size() >= 320);
  }
  // Templates are fixed per word and variants differ.
  const auto a = fcwr::synth_word(0, 1, 1), b = fcwr::synth_word(0, 1, 1), c = fcwr::synth_word(0, 1, 2);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);
}

TEST_CASE("extract writes one tensor per utterance") {
  Toy toy(2, 1);
  const auto both = toy.extract(fcwr::FeatureSet::both, "both");
  const auto store = fcwr::FeatureStore::open(both);
  REQUIRE(store.entries.size() == 15);
  for (const auto& e : store.entries) {
    const auto t = fcwr::read_features(e.file);
    CHECK(t.rows() == 256);
    CHECK(t.cols() == 256);
    CHECK(t.channels() == 2);
    CHECK(t.valid_cols() == 24);
  }
  CHECK(store.select("synthetic", fcwr::Split::train).size() == 10);
  CHECK(store.select("synthetic", fcwr::Split::test).size() == 5);
  CHECK(store.stats_for("synthetic").size() == 2);
  CHECK(store.stats_for("synthetic")[1].mean > 100.0);  // centroids are in Hz

  const auto json = nlohmann::json::parse(testutil::read_text(both / "extract.json"));
  CHECK(json["tensor_shape"] == nlohmann::json::array({256, 256, 2}));
  CHECK(json["tool_version"] == fcwr::kToolVersion);
  CHECK(json["feature_config"]["frame_ms"] == 20.0);

  const auto mfcc = toy.extract(fcwr::FeatureSet::mfcc, "mfcc");
  CHECK(fcwr::read_features(fcwr::FeatureStore::open(mfcc).entries[0].file).channels() == 1);
}

TEST_CASE("extract reports the failing row") {
  Toy toy(1, 1);
  auto text = testutil::read_text(toy.manifest);
  text += "wav/none.wav,kids,synthetic,train\n";
  testutil::write_text(toy.manifest, text);
  fcwr::ExtractOptions e;
  e.manifest = toy.manifest;
  e.out_dir = toy.dir / "f";
  try {
    fcwr::run_extract(e);
    FAIL("expected an error");
  } catch (const fcwr::Error& err) {
    CHECK(err.code() == fcwr::ErrorCode::MissingFile);
    CHECK(std::string(err.what()).find("row 12") != std::string::npos);
  }
}

TEST_CASE("train writes checkpoint, history and manifest deterministically") {
  Toy toy(2, 1);
  const auto f = toy.extract(fcwr::FeatureSet::both, "f");
  const auto a = toy.train(f, "a", 5);
  const auto b = toy.train(f, "b", 5);
  CHECK(fs::exists(a.checkpoint));
  CHECK(count_lines(a.loss_history) == 6);
  CHECK(a.losses.size() == 5);
  CHECK(testutil::read_text(a.checkpoint) == testutil::read_text(b.checkpoint));
  const auto run = nlohmann::json::parse(testutil::read_text(a.run_manifest));
  CHECK(run["accent"] == "synthetic");
  CHECK(run["train_config"]["epochs"] == 5);
  CHECK(run["cnn_config"]["channels"] == 2);

  fcwr::TrainOptions t;
  t.features_dir = f;
  t.accent = "martian";
  t.out_dir = toy.dir / "c";
  CHECK_ERROR_CODE(fcwr::run_train(t), EmptyDataset);
}

TEST_CASE("eval appends clean and noisy rows") {
  Toy toy(2, 1);
  const auto f = toy.extract(fcwr::FeatureSet::both, "f");
  const auto model = toy.train(f, "m", 3);
  fcwr::EvalOptions e;
  e.checkpoint = model.checkpoint;
  e.features_dir = f;
  e.results_csv = toy.dir / "results.csv";
  const auto clean = fcwr::run_eval(e);
  REQUIRE(clean.size() == 1);
  CHECK(!clean[0].snr_db);
  CHECK(clean[0].report.total() == 5);
  e.noise = "white";
  const auto noisy = fcwr::run_eval(e);
  CHECK(noisy.size() == 5);
  CHECK(fs::exists(model.checkpoint.parent_path() / "eval_mfcc+fc_white.json"));

  const auto rows = fcwr::read_results(e.results_csv);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].noise == "none");
  CHECK(!rows[0].snr_db);
  CHECK(rows[1].noise == "white");
  CHECK(*rows[5].snr_db == 20.0);
  for (const auto& r : rows) {
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);
    CHECK(r.features == "mfcc+fc");
  }
  CHECK(testutil::read_text(e.results_csv).rfind("accent,features,noise,snr_db,accuracy\n", 0) == 0);

  // Same inputs and seeds give the same rows.
  fcwr::EvalOptions again = e;
  again.results_csv = toy.dir / "again.csv";
  fcwr::run_eval(again);
  const auto lines = testutil::read_text(again.results_csv);
  const auto all = testutil::read_text(e.results_csv);
  CHECK(all.find(lines.substr(lines.find('\n') + 1)) != std::string::npos);

  // A model trained on one channel cannot score two-channel features.
  const auto mf = toy.extract(fcwr::FeatureSet::mfcc, "mf");
  const auto m1 = toy.train(mf, "m1", 1);
  e.checkpoint = m1.checkpoint;
  CHECK_ERROR_CODE(fcwr::run_eval(e), ShapeMismatch);

  const auto plots = fcwr::write_snr_plots(e.results_csv, toy.dir / "plots");
  REQUIRE(plots.size() == 1);
  CHECK(testutil::read_text(plots[0]).find("<svg") != std::string::npos);
}
