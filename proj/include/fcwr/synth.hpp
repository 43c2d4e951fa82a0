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


// Synthetic stand-in for a segmented word corpus: every "word" is a fixed
// sequence of multi-tone segments, and each utterance perturbs its timing,
// pitch and level.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fcwr/audio_io.hpp"

namespace fcwr {

struct SynthCorpusOptions {
  std::filesystem::path out_dir;
  std::vector<std::string> words = {"kids", "bags", "store", "station", "please"};
  std::vector<std::string> accents = {"synthetic"};
  std::size_t train_per_word = 20;
  std::size_t test_per_word = 5;
  std::uint64_t seed = 0;
  double background_snr_db = 30.0;  // white floor so no utterance is digital silence
};

/// One utterance of template `word_index`; `variant` selects the jitter draw.
AudioBuffer synth_word(std::size_t word_index, std::uint64_t template_seed, std::uint64_t variant_seed,
                       double background_snr_db = 30.0);

/// Writes wav/<accent>/<word>_<split>_<n>.wav plus manifest.csv and returns the
/// manifest path.
std::filesystem::path generate_corpus(const SynthCorpusOptions& opts);

}  // namespace fcwr
