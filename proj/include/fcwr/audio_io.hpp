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


#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fcwr {

inline constexpr int kSampleRateHz = 16000;

/// Mono PCM signal with amplitudes normalized to [-1, 1).
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = kSampleRateHz;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

/// Reads a 16 kHz mono 16-bit PCM RIFF/WAVE file. Samples are scaled by 1/32768.
AudioBuffer load_wav(const std::filesystem::path& path);

/// Writes a canonical 44-byte-header WAV. Values are rounded to the nearest
/// int16 step and saturated at the int16 range.
void save_wav(const std::filesystem::path& path, const AudioBuffer& audio);

enum class Split { train, test };

std::string to_string(Split split);
Split parse_split(const std::string& text);

struct UtteranceRecord {
  std::filesystem::path path;  // resolved against the manifest directory
  std::string word;
  std::string accent;
  Split split = Split::train;
  std::size_t row = 0;  // 1-based line number in the manifest
};

struct DatasetManifest {
  std::vector<UtteranceRecord> records;
  std::vector<std::string> vocabulary;  // index = class label
  std::vector<std::string> accents;     // first-appearance order

  /// Class index of word, or -1 when the word is not in the vocabulary.
  int class_index(const std::string& word) const;
};

/// Parses a `path,word,accent,split` CSV manifest.
///
/// The vocabulary defaults to the sorted distinct words; when `vocabulary` is
/// given it fixes the class order and any other word is rejected. Within every
/// accent and split, all vocabulary words must have the same count.
DatasetManifest load_manifest(const std::filesystem::path& path,
                              const std::optional<std::vector<std::string>>& vocabulary = std::nullopt);

}  // namespace fcwr
