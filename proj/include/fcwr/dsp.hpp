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


// Short-time analysis: pre-emphasis, framing, windowing and the one-sided
// magnitude/power spectrum of a zero-padded frame.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fcwr/audio_io.hpp"

namespace fcwr {

enum class WindowType { hamming, rectangular };

std::string to_string(WindowType window);
WindowType parse_window(const std::string& text);

struct FrameConfig {
  double frame_ms = 20.0;
  double shift_ms = 10.0;
  std::size_t fft_size = 512;
  double preemphasis_coeff = 0.98;
  WindowType window = WindowType::hamming;

  std::size_t frame_length(int sample_rate_hz) const;
  std::size_t hop_length(int sample_rate_hz) const;

  /// Throws InvalidConfig unless 0 < shift <= frame, fft_size is a power of
  /// two, and the frame fits in fft_size.
  void validate(int sample_rate_hz) const;
};

struct Spectrum {
  std::vector<double> magnitudes;  // |S(f)| for fft_size/2 + 1 bins
  std::vector<double> power;       // |S(f)|^2
  double bin_hz = 0.0;

  std::size_t num_bins() const noexcept { return magnitudes.size(); }
  double bin_frequency(std::size_t bin) const noexcept { return static_cast<double>(bin) * bin_hz; }
};

/// y[n] = x[n] - coeff * x[n-1] over the whole utterance, with x[-1] = 0.
AudioBuffer preemphasize(const AudioBuffer& signal, double coeff = 0.98);

std::vector<double> make_window(WindowType type, std::size_t length);

/// Splits into floor((N - L) / H) + 1 windowed frames; the trailing partial
/// frame is dropped.
std::vector<std::vector<double>> frame_signal(const AudioBuffer& signal, const FrameConfig& cfg);

/// One-sided spectrum of `frame` zero-padded to cfg.fft_size.
Spectrum spectrum(std::span<const double> frame, const FrameConfig& cfg, int sample_rate_hz);

}  // namespace fcwr
