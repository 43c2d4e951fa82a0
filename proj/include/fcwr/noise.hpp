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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>

#include "fcwr/audio_io.hpp"

namespace fcwr {

struct SyntheticWhite {};

struct NoiseSpec {
  std::variant<SyntheticWhite, std::filesystem::path> source = SyntheticWhite{};
  double snr_db = 0.0;
  std::uint64_t seed = 0;

  /// "white" or the noise file stem, as written to results files.
  std::string label() const;
};

/// Parses "white" or a path to a WAV file.
NoiseSpec make_noise_spec(const std::string& source, double snr_db, std::uint64_t seed);

/// Zero-mean Gaussian noise with sigma 0.1 (Box-Muller over a seeded uniform
/// generator). Deterministic per seed.
AudioBuffer synth_white(std::size_t length, std::uint64_t seed, int sample_rate_hz = kSampleRateHz);

enum class ColoredNoise {
  lowpass,   // energy concentrated below ~1 kHz, babble-like
  highpass,  // energy concentrated above ~3 kHz, hfchannel-like
};

/// Filtered white noise used as a stand-in for band-limited corpus noises.
AudioBuffer synth_colored(std::size_t length, std::uint64_t seed, ColoredNoise kind,
                          int sample_rate_hz = kSampleRateHz);

double rms(std::span<const double> x);

/// 10 log10(P_signal / P_noise) with full-signal mean power.
double measure_snr_db(std::span<const double> signal, std::span<const double> noise);

struct MixResult {
  AudioBuffer mixed;
  AudioBuffer added_noise;  // the scaled segment actually added
  double gain = 0.0;
  std::size_t offset = 0;
};

/// Adds `noise` to `clean` at the requested SNR.
///
/// A segment of clean.size() samples is taken from the noise starting at a
/// seeded offset, wrapping around when the noise is shorter. It is scaled by
/// (rms_clean / rms_segment) * 10^(-snr_db / 20). The result is not clipped.
MixResult mix_with_noise(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db, std::uint64_t seed);

/// Resolves the NoiseSpec source (synthesizing or loading) and mixes.
AudioBuffer mix_at_snr(const AudioBuffer& clean, const NoiseSpec& spec);

}  // namespace fcwr
