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


#include "fcwr/dsp.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "fcwr/error.hpp"

namespace fcwr {

std::string to_string(WindowType window) {
  return window == WindowType::hamming ? "hamming" : "rectangular";
}

WindowType parse_window(const std::string& text) {
  if (text == "hamming") return WindowType::hamming;
  if (text == "rectangular") return WindowType::rectangular;
  throw Error(ErrorCode::InvalidConfig, "unknown window '" + text + "'");
}

std::size_t FrameConfig::frame_length(int sample_rate_hz) const {
  return static_cast<std::size_t>(std::llround(frame_ms * sample_rate_hz / 1000.0));
}

std::size_t FrameConfig::hop_length(int sample_rate_hz) const {
  return static_cast<std::size_t>(std::llround(shift_ms * sample_rate_hz / 1000.0));
}

void FrameConfig::validate(int sample_rate_hz) const {
  if (!(shift_ms > 0.0) || shift_ms > frame_ms) {
    throw Error(ErrorCode::InvalidConfig, "require 0 < shift_ms <= frame_ms");
  }
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0) {
    throw Error(ErrorCode::InvalidConfig, "fft_size must be a power of two");
  }
  if (sample_rate_hz <= 0) throw Error(ErrorCode::InvalidConfig, "sample rate must be positive");
  const auto frame = frame_length(sample_rate_hz);
  if (frame == 0 || hop_length(sample_rate_hz) == 0) {
    throw Error(ErrorCode::InvalidConfig, "frame or hop rounds to zero samples");
  }
  if (frame > fft_size) {
    throw Error(ErrorCode::FrameTooLong, "frame of " + std::to_string(frame) +
                                             " samples exceeds fft_size " + std::to_string(fft_size));
  }
}

AudioBuffer preemphasize(const AudioBuffer& signal, double coeff) {
  if (signal.empty()) throw Error(ErrorCode::EmptySignal, "cannot pre-emphasize an empty signal");
  AudioBuffer out{std::vector<double>(signal.size()), signal.sample_rate_hz};
  out.samples[0] = signal.samples[0];
  for (std::size_t n = 1; n < signal.size(); ++n) {
    out.samples[n] = signal.samples[n] - coeff * signal.samples[n - 1];
  }
  return out;
}

std::vector<double> make_window(WindowType type, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (type == WindowType::hamming && length > 1) {
    const double denom = static_cast<double>(length - 1);
    for (std::size_t n = 0; n < length; ++n) {
      w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
    }
  }
  return w;
}

std::vector<std::vector<double>> frame_signal(const AudioBuffer& signal, const FrameConfig& cfg) {
  cfg.validate(signal.sample_rate_hz);
  const std::size_t frame = cfg.frame_length(signal.sample_rate_hz);
  const std::size_t hop = cfg.hop_length(signal.sample_rate_hz);
  if (signal.size() < frame) {
    throw Error(ErrorCode::SignalTooShort, "signal has " + std::to_string(signal.size()) +
                                               " samples, one frame needs " + std::to_string(frame));
  }
  const std::size_t count = (signal.size() - frame) / hop + 1;
  const auto window = make_window(cfg.window, frame);
  std::vector<std::vector<double>> frames(count, std::vector<double>(frame));
  for (std::size_t t = 0; t < count; ++t) {
    const double* src = signal.samples.data() + t * hop;
    for (std::size_t n = 0; n < frame; ++n) frames[t][n] = src[n] * window[n];
  }
  return frames;
}

namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW's planner is not thread-safe; plans are created once per size under a
// lock and then executed with the thread-safe new-array interface.
fftw_plan r2c_plan(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanHandle> plans;
  std::lock_guard lock(mutex);
  auto& slot = plans[n];
  if (!slot) {
    std::vector<double> in(n);
    std::vector<fftw_complex> out(n / 2 + 1);
    slot.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED));
  }
  return slot.get();
}

}  // namespace

Spectrum spectrum(std::span<const double> frame, const FrameConfig& cfg, int sample_rate_hz) {
  const std::size_t n = cfg.fft_size;
  if (n < 2 || (n & (n - 1)) != 0) throw Error(ErrorCode::InvalidConfig, "fft_size must be a power of two");
  if (frame.size() > n) {
    throw Error(ErrorCode::FrameTooLong, "frame of " + std::to_string(frame.size()) +
                                             " samples exceeds fft_size " + std::to_string(n));
  }
  std::vector<double> padded(n, 0.0);
  std::copy(frame.begin(), frame.end(), padded.begin());
  std::vector<fftw_complex> out(n / 2 + 1);
  fftw_execute_dft_r2c(r2c_plan(n), padded.data(), out.data());

  Spectrum s;
  s.bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(n);
  s.magnitudes.resize(out.size());
  s.power.resize(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double p = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    s.magnitudes[k] = std::sqrt(p);
    s.power[k] = s.magnitudes[k] * s.magnitudes[k];
  }
  return s;
}

}  // namespace fcwr
