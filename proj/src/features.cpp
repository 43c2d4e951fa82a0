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


#include "fcwr/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "fcwr/detail/little_endian.hpp"
#include "fcwr/error.hpp"

namespace fcwr {

std::string to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::mfcc: return "mfcc";
    case FeatureSet::fc: return "fc";
    case FeatureSet::both: return "both";
  }
  return "both";
}

FeatureSet parse_feature_set(const std::string& text) {
  if (text == "mfcc") return FeatureSet::mfcc;
  if (text == "fc") return FeatureSet::fc;
  if (text == "both" || text == "mfcc+fc") return FeatureSet::both;
  throw Error(ErrorCode::InvalidConfig, "unknown feature set '" + text + "' (expected mfcc, fc or both)");
}

std::string feature_label(FeatureSet set) { return set == FeatureSet::both ? "mfcc+fc" : to_string(set); }

std::size_t channel_count(FeatureSet set) { return set == FeatureSet::both ? 2 : 1; }

BandEnergies band_energies(const Spectrum& power_spectrum, const MelFilterbank& fb) {
  if (power_spectrum.power.size() != fb.num_bins()) {
    throw Error(ErrorCode::DimensionMismatch, "spectrum has " + std::to_string(power_spectrum.power.size()) +
                                                  " bins, filterbank expects " + std::to_string(fb.num_bins()));
  }
  BandEnergies out;
  out.values.resize(static_cast<std::size_t>(fb.num_filters()));
  for (int k = 0; k < fb.num_filters(); ++k) {
    const auto w = fb.row(k);
    double acc = 0.0;
    for (std::size_t b = 0; b < w.size(); ++b) acc += power_spectrum.power[b] * w[b];
    out.values[static_cast<std::size_t>(k)] = acc * fb.bin_hz();
  }
  return out;
}

MfccVector mfcc(const BandEnergies& energies, double log_floor) {
  const std::size_t K = energies.values.size();
  std::vector<double> logs(K);
  for (std::size_t k = 0; k < K; ++k) logs[k] = std::log(std::max(energies.values[k], log_floor));
  MfccVector out;
  out.coeffs.resize(K);
  const double step = std::numbers::pi / static_cast<double>(K);
  for (std::size_t n = 1; n <= K; ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
      acc += logs[k - 1] * std::cos(static_cast<double>(n) * (static_cast<double>(k) - 0.5) * step);
    }
    out.coeffs[n - 1] = acc;
  }
  return out;
}

FcVector frequency_centroids(const Spectrum& spectrum, const MelFilterbank& fb, bool use_power) {
  if (spectrum.magnitudes.size() != fb.num_bins()) {
    throw Error(ErrorCode::DimensionMismatch, "spectrum has " + std::to_string(spectrum.magnitudes.size()) +
                                                  " bins, filterbank expects " + std::to_string(fb.num_bins()));
  }
  const auto& mass = use_power ? spectrum.power : spectrum.magnitudes;
  FcVector out;
  out.centroids.resize(static_cast<std::size_t>(fb.num_filters()));
  for (int k = 0; k < fb.num_filters(); ++k) {
    const double lo = fb.lower_edge(k);
    const double hi = fb.upper_edge(k);
    double num = 0.0, den = 0.0;
    for (std::size_t b = 0; b < mass.size(); ++b) {
      const double f = spectrum.bin_frequency(b);
      if (f <= lo) continue;
      if (f >= hi) break;
      num += f * mass[b];
      den += mass[b];
    }
    out.centroids[static_cast<std::size_t>(k)] = den < 1e-12 ? 0.5 * (lo + hi) : num / den;
  }
  return out;
}

FeatureTensor::FeatureTensor(std::size_t rows, std::size_t cols, std::size_t channels)
    : rows_(rows), cols_(cols), channels_(channels), data_(rows * cols * channels, 0.0f) {}

void FeatureTensor::set_valid_region(std::size_t rows, std::size_t cols) {
  valid_rows_ = std::min(rows, rows_);
  valid_cols_ = std::min(cols, cols_);
}

FeatureTensor assemble_tensor(std::span<const FeaturePlane> planes, std::size_t rows, std::size_t cols) {
  if (planes.empty() || planes.size() > 2) {
    throw Error(ErrorCode::DimensionMismatch, "tensor needs 1 or 2 channels, got " + std::to_string(planes.size()));
  }
  const std::size_t frames = planes.front().frames.size();
  std::size_t width = 0;
  for (const auto& p : planes) {
    if (p.frames.size() != frames) {
      throw Error(ErrorCode::DimensionMismatch, "channels disagree on frame count");
    }
    for (const auto& f : p.frames) {
      if (f.size() > cols) {
        throw Error(ErrorCode::TooManyCoefficients,
                    std::to_string(f.size()) + " coefficients exceed " + std::to_string(cols) + " columns");
      }
      width = std::max(width, f.size());
    }
  }
  FeatureTensor t(rows, cols, planes.size());
  const std::size_t used = std::min(frames, rows);
  for (std::size_t ch = 0; ch < planes.size(); ++ch) {
    t.channel_names.push_back(planes[ch].name);
    for (std::size_t r = 0; r < used; ++r) {
      const auto& v = planes[ch].frames[r];
      for (std::size_t c = 0; c < v.size(); ++c) t.at(r, c, ch) = static_cast<float>(v[c]);
    }
  }
  t.set_valid_region(used, width);
  return t;
}

void StatsAccumulator::add(const FeatureTensor& t) {
  if (sum_.empty()) {
    sum_.assign(t.channels(), 0.0);
    sum_sq_.assign(t.channels(), 0.0);
    count_.assign(t.channels(), 0);
  } else if (sum_.size() != t.channels()) {
    throw Error(ErrorCode::ShapeMismatch, "tensors with different channel counts in one statistics pass");
  }
  for (std::size_t r = 0; r < t.valid_rows(); ++r) {
    for (std::size_t c = 0; c < t.valid_cols(); ++c) {
      for (std::size_t ch = 0; ch < t.channels(); ++ch) {
        const double x = t.at(r, c, ch);
        sum_[ch] += x;
        sum_sq_[ch] += x * x;
        ++count_[ch];
      }
    }
  }
}

std::vector<ChannelStats> StatsAccumulator::finish() const {
  std::vector<ChannelStats> stats(sum_.size());
  for (std::size_t ch = 0; ch < sum_.size(); ++ch) {
    if (count_[ch] == 0) continue;
    const double n = static_cast<double>(count_[ch]);
    const double mean = sum_[ch] / n;
    stats[ch].mean = mean;
    stats[ch].stddev = std::sqrt(std::max(0.0, sum_sq_[ch] / n - mean * mean));
  }
  return stats;
}

FeatureTensor normalize_tensor(const FeatureTensor& t, std::span<const ChannelStats> stats) {
  if (stats.size() != t.channels()) {
    throw Error(ErrorCode::ShapeMismatch, "have statistics for " + std::to_string(stats.size()) +
                                              " channels, tensor has " + std::to_string(t.channels()));
  }
  FeatureTensor out = t;
  for (std::size_t r = 0; r < t.valid_rows(); ++r) {
    for (std::size_t c = 0; c < t.valid_cols(); ++c) {
      for (std::size_t ch = 0; ch < t.channels(); ++ch) {
        const double sigma = stats[ch].stddev < 1e-12 ? 1.0 : stats[ch].stddev;
        out.at(r, c, ch) = static_cast<float>((t.at(r, c, ch) - stats[ch].mean) / sigma);
      }
    }
  }
  return out;
}

void write_features(const std::filesystem::path& path, const FeatureTensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write("FCF1", 4);
  detail::put_u32(out, static_cast<std::uint32_t>(t.rows()));
  detail::put_u32(out, static_cast<std::uint32_t>(t.cols()));
  detail::put_u32(out, static_cast<std::uint32_t>(t.channels()));
  for (float x : t.data()) detail::put_f32(out, x);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

FeatureTensor read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  unsigned char header[16];
  if (!detail::read_exact(in, header, 4) || !std::equal(header, header + 4, "FCF1")) {
    throw Error(ErrorCode::BadMagic, path.string() + " is not an FCF1 feature file");
  }
  if (!detail::read_exact(in, header + 4, 12)) {
    throw Error(ErrorCode::ShapeMismatch, path.string() + ": truncated header");
  }
  const std::size_t rows = detail::get_u32(header + 4);
  const std::size_t cols = detail::get_u32(header + 8);
  const std::size_t channels = detail::get_u32(header + 12);
  if (rows == 0 || cols == 0 || channels == 0 || rows * cols * channels > (std::size_t{1} << 30)) {
    throw Error(ErrorCode::ShapeMismatch, path.string() + ": implausible shape");
  }
  FeatureTensor t(rows, cols, channels);
  std::vector<unsigned char> payload(rows * cols * channels * 4);
  if (!detail::read_exact(in, payload.data(), payload.size()) || in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::ShapeMismatch, path.string() + ": payload size does not match header " +
                                              std::to_string(rows) + "x" + std::to_string(cols) + "x" +
                                              std::to_string(channels));
  }
  auto data = t.data();
  std::size_t valid_rows = 0, valid_cols = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = detail::get_f32(payload.data() + 4 * i);
    if (data[i] != 0.0f) {
      const std::size_t cell = i / channels;
      valid_rows = std::max(valid_rows, cell / cols + 1);
      valid_cols = std::max(valid_cols, cell % cols + 1);
    }
  }
  t.set_valid_region(valid_rows, valid_cols);
  return t;
}

FeatureExtractor::FeatureExtractor(const FeatureConfig& cfg, int sample_rate_hz)
    : cfg_(cfg),
      sample_rate_hz_(sample_rate_hz),
      fb_(MelFilterbank::build(cfg.num_filters, cfg.f_min_hz, cfg.f_max_hz, cfg.frame.fft_size, sample_rate_hz)) {
  cfg_.frame.validate(sample_rate_hz);
}

std::vector<MfccVector> FeatureExtractor::mfcc_frames(const AudioBuffer& audio) const {
  const auto emphasized = preemphasize(audio, cfg_.frame.preemphasis_coeff);
  const auto frames = frame_signal(emphasized, cfg_.frame);
  std::vector<MfccVector> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    out.push_back(mfcc(band_energies(spectrum(f, cfg_.frame, sample_rate_hz_), fb_), cfg_.log_floor));
  }
  return out;
}

std::vector<FcVector> FeatureExtractor::fc_frames(const AudioBuffer& audio) const {
  if (audio.empty()) throw Error(ErrorCode::EmptySignal, "cannot extract features from an empty signal");
  const auto frames =
      frame_signal(cfg_.fc_preemphasized ? preemphasize(audio, cfg_.frame.preemphasis_coeff) : audio, cfg_.frame);
  std::vector<FcVector> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    out.push_back(frequency_centroids(spectrum(f, cfg_.frame, sample_rate_hz_), fb_, cfg_.fc_use_power));
  }
  return out;
}

FeatureTensor FeatureExtractor::extract(const AudioBuffer& audio) const {
  if (audio.sample_rate_hz != sample_rate_hz_) {
    throw Error(ErrorCode::UnsupportedFormat, "audio at " + std::to_string(audio.sample_rate_hz) +
                                                  " Hz, extractor configured for " +
                                                  std::to_string(sample_rate_hz_));
  }
  std::vector<FeaturePlane> planes;
  if (cfg_.features != FeatureSet::fc) {
    FeaturePlane p{"mfcc", {}};
    for (auto& v : mfcc_frames(audio)) p.frames.push_back(std::move(v.coeffs));
    planes.push_back(std::move(p));
  }
  if (cfg_.features != FeatureSet::mfcc) {
    FeaturePlane p{"fc", {}};
    for (auto& v : fc_frames(audio)) p.frames.push_back(std::move(v.centroids));
    planes.push_back(std::move(p));
  }
  return assemble_tensor(planes);
}

}  // namespace fcwr
