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


#include "fcwr/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "fcwr/error.hpp"
#include "fcwr/melbank.hpp"
#include "fcwr/noise.hpp"
#include "fcwr/random.hpp"

namespace fcwr {

namespace {

constexpr std::size_t kSegments = 3;
constexpr std::size_t kTonesPerSegment = 2;

struct Segment {
  double duration_s;
  double freqs[kTonesPerSegment];
  double amps[kTonesPerSegment];
};

std::vector<Segment> word_template(std::size_t word_index, std::uint64_t template_seed) {
  Rng rng(mix_seed(template_seed, word_index));
  const double mel_lo = hz_to_mel(200.0), mel_hi = hz_to_mel(4000.0);
  std::vector<Segment> segs(kSegments);
  for (auto& s : segs) {
    s.duration_s = rng.uniform(0.12, 0.22);
    for (std::size_t t = 0; t < kTonesPerSegment; ++t) {
      s.freqs[t] = mel_to_hz(rng.uniform(mel_lo, mel_hi));
      s.amps[t] = rng.uniform(0.4, 1.0);
    }
  }
  return segs;
}

}  // namespace

AudioBuffer synth_word(std::size_t word_index, std::uint64_t template_seed, std::uint64_t variant_seed,
                       double background_snr_db) {
  const auto segs = word_template(word_index, template_seed);
  Rng rng(variant_seed);
  const double fs = kSampleRateHz;
  const double lead = rng.uniform(0.02, 0.08);
  const double stretch = rng.uniform(0.85, 1.15);
  const double pitch = rng.uniform(0.97, 1.03);
  const double gain = rng.uniform(0.15, 0.35);

  double total = lead;
  for (const auto& s : segs) total += s.duration_s * stretch;
  total += 0.05;
  AudioBuffer out{std::vector<double>(static_cast<std::size_t>(total * fs), 0.0), kSampleRateHz};

  double start = lead;
  for (const auto& s : segs) {
    const double dur = s.duration_s * stretch;
    const auto n0 = static_cast<std::size_t>(start * fs);
    const auto len = static_cast<std::size_t>(dur * fs);
    double phase[kTonesPerSegment];
    double amp[kTonesPerSegment];
    for (std::size_t t = 0; t < kTonesPerSegment; ++t) {
      phase[t] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      amp[t] = s.amps[t] * rng.uniform(0.8, 1.2);
    }
    const std::size_t ramp = len / 5;
    for (std::size_t n = 0; n < len && n0 + n < out.size(); ++n) {
      double env = 1.0;
      if (n < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(n) / ramp);
      if (len - n <= ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(len - n) / ramp);
      double v = 0.0;
      for (std::size_t t = 0; t < kTonesPerSegment; ++t) {
        v += amp[t] * std::sin(2.0 * std::numbers::pi * s.freqs[t] * pitch * static_cast<double>(n) / fs + phase[t]);
      }
      out.samples[n0 + n] += gain * env * v / kTonesPerSegment;
    }
    start += dur;
  }
  const auto floor = synth_white(out.size(), mix_seed(variant_seed, 7));
  return mix_with_noise(out, floor, background_snr_db, mix_seed(variant_seed, 8)).mixed;
}

std::filesystem::path generate_corpus(const SynthCorpusOptions& opts) {
  namespace fs = std::filesystem;
  const fs::path manifest_path = opts.out_dir / "manifest.csv";
  fs::create_directories(opts.out_dir);
  std::ofstream manifest(manifest_path);
  if (!manifest) throw Error(ErrorCode::Io, "cannot write " + manifest_path.string());
  manifest << "path,word,accent,split\n";

  std::uint64_t counter = 0;
  for (std::size_t a = 0; a < opts.accents.size(); ++a) {
    const auto& accent = opts.accents[a];
    const fs::path dir = opts.out_dir / "wav" / accent;
    fs::create_directories(dir);
    for (std::size_t w = 0; w < opts.words.size(); ++w) {
      for (Split split : {Split::train, Split::test}) {
        const std::size_t count = split == Split::train ? opts.train_per_word : opts.test_per_word;
        for (std::size_t i = 0; i < count; ++i) {
          const std::string name = opts.words[w] + "_" + to_string(split) + "_" + std::to_string(i) + ".wav";
          const auto audio = synth_word(w, mix_seed(opts.seed, a), mix_seed(opts.seed, 1000 + counter++),
                                        opts.background_snr_db);
          save_wav(dir / name, audio);
          manifest << (fs::path("wav") / accent / name).generic_string() << ',' << opts.words[w] << ',' << accent
                   << ',' << to_string(split) << '\n';
        }
      }
    }
  }
  return manifest_path;
}

}  // namespace fcwr
