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


#include "fcwr/noise.hpp"

#include <cmath>
#include <numbers>

#include "fcwr/error.hpp"
#include "fcwr/random.hpp"

namespace fcwr {

std::string NoiseSpec::label() const {
  if (std::holds_alternative<SyntheticWhite>(source)) return "white";
  return std::get<std::filesystem::path>(source).stem().string();
}

NoiseSpec make_noise_spec(const std::string& source, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw Error(ErrorCode::InvalidConfig, "snr_db must be finite");
  NoiseSpec spec;
  spec.snr_db = snr_db;
  spec.seed = seed;
  if (source != "white") spec.source = std::filesystem::path(source);
  return spec;
}

AudioBuffer synth_white(std::size_t length, std::uint64_t seed, int sample_rate_hz) {
  Rng rng(seed);
  AudioBuffer out{std::vector<double>(length), sample_rate_hz};
  for (auto& x : out.samples) x = 0.1 * rng.gaussian();
  return out;
}

AudioBuffer synth_colored(std::size_t length, std::uint64_t seed, ColoredNoise kind, int sample_rate_hz) {
  // Two cascaded one-pole sections; cutoff ~1 kHz (low) or ~3 kHz (high).
  const double fc = kind == ColoredNoise::lowpass ? 1000.0 : 3000.0;
  const double a = std::exp(-2.0 * std::numbers::pi * fc / sample_rate_hz);
  auto white = synth_white(length, seed, sample_rate_hz);
  double s1 = 0.0, s2 = 0.0;
  for (auto& x : white.samples) {
    s1 = (1.0 - a) * x + a * s1;
    s2 = (1.0 - a) * s1 + a * s2;
    x = kind == ColoredNoise::lowpass ? s2 : x - s2;
  }
  return white;
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double measure_snr_db(std::span<const double> signal, std::span<const double> noise) {
  const double ps = rms(signal), pn = rms(noise);
  return 20.0 * std::log10(ps / pn);
}

MixResult mix_with_noise(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw Error(ErrorCode::InvalidConfig, "snr_db must be finite");
  if (clean.empty()) throw Error(ErrorCode::EmptySignal, "clean signal is empty");
  if (noise.empty()) throw Error(ErrorCode::SilentNoise, "noise signal is empty");
  if (noise.sample_rate_hz != clean.sample_rate_hz) {
    throw Error(ErrorCode::UnsupportedFormat, "noise sample_rate " + std::to_string(noise.sample_rate_hz) +
                                                  " differs from clean " + std::to_string(clean.sample_rate_hz));
  }
  const double clean_rms = rms(clean.samples);
  if (clean_rms == 0.0) throw Error(ErrorCode::SilentClean, "clean signal has zero energy");

  MixResult result;
  Rng rng(seed);
  result.offset = static_cast<std::size_t>(rng.below(noise.size()));
  std::vector<double> segment(clean.size());
  for (std::size_t i = 0; i < segment.size(); ++i) {
    segment[i] = noise.samples[(result.offset + i) % noise.size()];
  }
  const double noise_rms = rms(segment);
  if (noise_rms == 0.0) throw Error(ErrorCode::SilentNoise, "selected noise segment has zero energy");

  result.gain = (clean_rms / noise_rms) * std::pow(10.0, -snr_db / 20.0);
  result.added_noise = AudioBuffer{std::move(segment), clean.sample_rate_hz};
  result.mixed = AudioBuffer{std::vector<double>(clean.size()), clean.sample_rate_hz};
  for (std::size_t i = 0; i < clean.size(); ++i) {
    result.added_noise.samples[i] *= result.gain;
    result.mixed.samples[i] = clean.samples[i] + result.added_noise.samples[i];
  }
  return result;
}

AudioBuffer mix_at_snr(const AudioBuffer& clean, const NoiseSpec& spec) {
  if (std::holds_alternative<SyntheticWhite>(spec.source)) {
    // Derive the noise stream from the seed; the offset draw uses its own stream.
    const auto noise = synth_white(clean.size(), mix_seed(spec.seed, 1), clean.sample_rate_hz);
    return mix_with_noise(clean, noise, spec.snr_db, spec.seed).mixed;
  }
  const auto noise = load_wav(std::get<std::filesystem::path>(spec.source));
  return mix_with_noise(clean, noise, spec.snr_db, spec.seed).mixed;
}

}  // namespace fcwr
