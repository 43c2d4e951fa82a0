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


// fcwr: MFCC + frequency-centroid word recognition toolkit.
//
// Exit codes: 0 success, 1 data or validation error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "fcwr/audio_io.hpp"
#include "fcwr/error.hpp"
#include "fcwr/melbank.hpp"
#include "fcwr/noise.hpp"
#include "fcwr/pipeline.hpp"
#include "fcwr/plot.hpp"
#include "fcwr/synth.hpp"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw CLI::ValidationError("--snr-grid", "bad value '" + item + "'");
    grid.push_back(v);
  }
  if (grid.empty()) throw CLI::ValidationError("--snr-grid", "empty grid");
  return grid;
}

std::vector<std::string> parse_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void add_frame_flags(CLI::App* cmd, fcwr::FeatureConfig& cfg, std::string& window, std::string& features) {
  cmd->add_option("--features", features, "Feature set: mfcc, fc or both")
      ->check(CLI::IsMember({"mfcc", "fc", "both"}))
      ->capture_default_str();
  cmd->add_option("--frame-ms", cfg.frame.frame_ms, "Frame length in ms")->capture_default_str();
  cmd->add_option("--shift-ms", cfg.frame.shift_ms, "Frame shift in ms")->capture_default_str();
  cmd->add_option("--fft-size", cfg.frame.fft_size, "FFT size (power of two)")->capture_default_str();
  cmd->add_option("--window", window, "Analysis window")
      ->check(CLI::IsMember({"hamming", "rectangular"}))
      ->capture_default_str();
  cmd->add_option("--num-filters", cfg.num_filters, "Mel filters K")->capture_default_str();
  cmd->add_option("--f-min", cfg.f_min_hz, "Lowest filterbank edge (Hz)")->capture_default_str();
  cmd->add_option("--f-max", cfg.f_max_hz, "Highest filterbank edge (Hz, negative = Nyquist)")->capture_default_str();
  cmd->add_flag("--fc-power", cfg.fc_use_power, "Weight centroids by power instead of magnitude");
  cmd->add_flag("--fc-preemphasized", cfg.fc_preemphasized, "Compute centroids on the pre-emphasized signal");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fcwr - MFCC and frequency-centroid features, noise corruption and CNN word recognition"};
  app.set_version_flag("--version", std::string(fcwr::kToolVersion));
  app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");
  app.require_subcommand(1);

  // extract
  fcwr::ExtractOptions extract;
  std::string extract_window = "hamming", extract_features = "both", extract_vocab;
  auto* cmd_extract = app.add_subcommand("extract", "Extract feature tensors for every utterance in a manifest");
  cmd_extract->add_option("manifest", extract.manifest, "CSV with header path,word,accent,split")->required();
  cmd_extract->add_option("--out", extract.out_dir, "Output features directory")->required();
  cmd_extract->add_option("--vocabulary", extract_vocab, "Comma-separated class order (default: sorted words)");
  add_frame_flags(cmd_extract, extract.features, extract_window, extract_features);

  // mix-noise
  std::string mix_in, mix_noise = "white", mix_out;
  double mix_snr = 0.0;
  std::uint64_t mix_seed = 0;
  auto* cmd_mix = app.add_subcommand("mix-noise", "Corrupt a WAV with additive noise at a target SNR");
  cmd_mix->add_option("--in", mix_in, "Clean 16 kHz mono WAV")->required();
  cmd_mix->add_option("--noise", mix_noise, "Noise WAV path or 'white'")->capture_default_str();
  cmd_mix->add_option("--snr-db", mix_snr, "Target SNR in dB")->required();
  cmd_mix->add_option("--seed", mix_seed, "Seed for the noise offset / synthesis")->capture_default_str();
  cmd_mix->add_option("--out", mix_out, "Output WAV")->required();

  // train
  fcwr::TrainOptions train;
  auto* cmd_train = app.add_subcommand("train", "Train the CNN for one accent");
  cmd_train->add_option("features_dir", train.features_dir, "Directory written by 'extract'")->required();
  cmd_train->add_option("--accent", train.accent, "Accent label to train on")->required();
  cmd_train->add_option("--out", train.out_dir, "Output directory for model.fcm and manifests")->required();
  cmd_train->add_option("--epochs", train.train.epochs)->capture_default_str();
  cmd_train->add_option("--batch-size", train.train.batch_size)->capture_default_str();
  cmd_train->add_option("--lr", train.train.learning_rate, "Adam learning rate")->capture_default_str();
  cmd_train->add_option("--seed", train.train.seed, "Initialization and shuffle seed")->capture_default_str();
  bool train_quiet = false;
  cmd_train->add_flag("--quiet", train_quiet, "Do not print per-epoch loss");

  // eval
  fcwr::EvalOptions eval;
  std::string eval_grid = "0,5,10,15,20", eval_accent, eval_report;
  auto* cmd_eval = app.add_subcommand("eval", "Evaluate a checkpoint on clean or corrupted test data");
  cmd_eval->add_option("checkpoint", eval.checkpoint, "model.fcm written by 'train'")->required();
  cmd_eval->add_option("features_dir", eval.features_dir, "Directory written by 'extract'")->required();
  cmd_eval->add_option("--noise", eval.noise, "none, white, or a noise WAV path")->capture_default_str();
  cmd_eval->add_option("--snr-grid", eval_grid, "Comma-separated SNRs in dB")->capture_default_str();
  cmd_eval->add_option("--results", eval.results_csv, "Results CSV to append to")->required();
  cmd_eval->add_option("--report", eval_report, "JSON report path (default: next to the checkpoint)");
  cmd_eval->add_option("--accent", eval_accent, "Override the accent recorded in run_manifest.json");
  cmd_eval->add_option("--seed", eval.seed, "Noise seed")->capture_default_str();

  // filterbank dump
  fcwr::FilterbankParams fb;
  std::string fb_out;
  auto* cmd_fb = app.add_subcommand("filterbank", "Mel filterbank utilities");
  cmd_fb->require_subcommand(1);
  auto* cmd_dump = cmd_fb->add_subcommand("dump", "Write the K x (fft_size/2+1) weight matrix as CSV");
  cmd_dump->add_option("--num-filters", fb.num_filters)->capture_default_str();
  cmd_dump->add_option("--f-min", fb.f_min_hz)->capture_default_str();
  cmd_dump->add_option("--f-max", fb.f_max_hz, "Negative selects Nyquist")->capture_default_str();
  cmd_dump->add_option("--fft-size", fb.fft_size)->capture_default_str();
  cmd_dump->add_option("--sample-rate", fb.sample_rate_hz)->capture_default_str();
  cmd_dump->add_option("--out", fb_out, "Output CSV (default: stdout)");

  // plot
  std::string plot_results, plot_out;
  auto* cmd_plot = app.add_subcommand("plot", "Render accuracy-vs-SNR SVG plots from a results CSV");
  cmd_plot->add_option("--results", plot_results)->required();
  cmd_plot->add_option("--out-dir", plot_out)->required();

  // synth-corpus
  fcwr::SynthCorpusOptions synth;
  std::string synth_words, synth_accents;
  auto* cmd_synth = app.add_subcommand("synth-corpus", "Generate a synthetic multi-tone word corpus and manifest");
  cmd_synth->add_option("--out", synth.out_dir)->required();
  cmd_synth->add_option("--train", synth.train_per_word, "Training utterances per word")->capture_default_str();
  cmd_synth->add_option("--test", synth.test_per_word, "Test utterances per word")->capture_default_str();
  cmd_synth->add_option("--seed", synth.seed)->capture_default_str();
  cmd_synth->add_option("--words", synth_words, "Comma-separated word labels");
  cmd_synth->add_option("--accents", synth_accents, "Comma-separated accent labels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_extract->parsed()) {
      extract.features.frame.window = fcwr::parse_window(extract_window);
      extract.features.features = fcwr::parse_feature_set(extract_features);
      if (!extract_vocab.empty()) extract.vocabulary = parse_list(extract_vocab);
      const auto summary = fcwr::run_extract(extract);
      std::cout << "extracted " << summary.files << " feature files into " << extract.out_dir.string() << '\n';
    } else if (cmd_mix->parsed()) {
      const auto clean = fcwr::load_wav(mix_in);
      const auto mixed = fcwr::mix_at_snr(clean, fcwr::make_noise_spec(mix_noise, mix_snr, mix_seed));
      fcwr::save_wav(mix_out, mixed);
    } else if (cmd_train->parsed()) {
      fcwr::EpochCallback progress;
      if (!train_quiet) {
        progress = [&](std::size_t epoch, double loss) {
          std::printf("epoch %zu/%zu loss %.6f\n", epoch + 1, train.train.epochs, loss);
          std::fflush(stdout);
        };
      }
      const auto summary = fcwr::run_train(train, progress);
      std::cout << "train accuracy " << summary.train_accuracy << ", checkpoint " << summary.checkpoint.string()
                << '\n';
    } else if (cmd_eval->parsed()) {
      eval.snr_grid = parse_grid(eval_grid);
      if (!eval_accent.empty()) eval.accent = eval_accent;
      if (!eval_report.empty()) eval.report_json = eval_report;
      for (const auto& row : fcwr::run_eval(eval)) std::cout << fcwr::format_result_row(row) << '\n';
    } else if (cmd_dump->parsed()) {
      const auto csv = fcwr::MelFilterbank::build(fb).to_csv();
      if (fb_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(fb_out);
        if (!out) throw fcwr::Error(fcwr::ErrorCode::Io, "cannot write " + fb_out);
        out << csv;
      }
    } else if (cmd_plot->parsed()) {
      for (const auto& p : fcwr::write_snr_plots(plot_results, plot_out)) std::cout << p.string() << '\n';
    } else if (cmd_synth->parsed()) {
      if (!synth_words.empty()) synth.words = parse_list(synth_words);
      if (!synth_accents.empty()) synth.accents = parse_list(synth_accents);
      std::cout << fcwr::generate_corpus(synth).string() << '\n';
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fcwr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
