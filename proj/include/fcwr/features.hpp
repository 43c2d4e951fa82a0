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
#include <span>
#include <string>
#include <vector>

#include "fcwr/audio_io.hpp"
#include "fcwr/dsp.hpp"
#include "fcwr/melbank.hpp"

namespace fcwr {

inline constexpr std::size_t kTensorRows = 256;
inline constexpr std::size_t kTensorCols = 256;
inline constexpr double kLogFloor = 1e-10;

/// Filter outputs S'_k: triangle-weighted power summed over bins.
struct BandEnergies {
  std::vector<double> values;
};

/// Cepstral coefficients C_1..C_K.
struct MfccVector {
  std::vector<double> coeffs;
};

/// Per-band frequency centroids F_1..F_K in Hz.
struct FcVector {
  std::vector<double> centroids;
};

enum class FeatureSet { mfcc, fc, both };

std::string to_string(FeatureSet set);
/// Accepts "mfcc", "fc", "both" and the report labels "mfcc+fc".
FeatureSet parse_feature_set(const std::string& text);
/// Label used in results files: "mfcc", "fc" or "mfcc+fc".
std::string feature_label(FeatureSet set);
std::size_t channel_count(FeatureSet set);

struct FeatureConfig {
  FrameConfig frame;
  int num_filters = 24;
  double f_min_hz = 0.0;
  double f_max_hz = -1.0;  // Nyquist
  FeatureSet features = FeatureSet::both;
  bool fc_use_power = false;       // centroid weights |S|^2 instead of |S|
  bool fc_preemphasized = false;   // centroids from s'(n) instead of s(n)
  double log_floor = kLogFloor;
};

BandEnergies band_energies(const Spectrum& power_spectrum, const MelFilterbank& fb);

/// C_n = sum_k log(max(S_k, floor)) cos(n (k - 1/2) pi / K), n = 1..K.
MfccVector mfcc(const BandEnergies& energies, double log_floor = kLogFloor);

/// Centroid of the spectrum restricted to f_{k-1} < f < f_{k+1}. A band with
/// (numerically) no mass falls back to the midpoint of its edges.
FcVector frequency_centroids(const Spectrum& spectrum, const MelFilterbank& fb, bool use_power = false);

/// rows x cols x channels float tensor, row-major and channel-minor.
///
/// valid_rows / valid_cols bound the region that may hold non-padding values.
class FeatureTensor {
 public:
  FeatureTensor() = default;
  FeatureTensor(std::size_t rows, std::size_t cols, std::size_t channels);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t valid_rows() const noexcept { return valid_rows_; }
  std::size_t valid_cols() const noexcept { return valid_cols_; }
  void set_valid_region(std::size_t rows, std::size_t cols);

  float& at(std::size_t r, std::size_t c, std::size_t ch) { return data_[(r * cols_ + c) * channels_ + ch]; }
  float at(std::size_t r, std::size_t c, std::size_t ch) const { return data_[(r * cols_ + c) * channels_ + ch]; }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  std::vector<std::string> channel_names;

  friend bool operator==(const FeatureTensor& a, const FeatureTensor& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.channels_ == b.channels_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0, channels_ = 0;
  std::size_t valid_rows_ = 0, valid_cols_ = 0;
  std::vector<float> data_;
};

/// One channel of per-frame vectors.
struct FeaturePlane {
  std::string name;
  std::vector<std::vector<double>> frames;
};

/// Places frame t at row t and coefficient j at column j of a 256 x 256 x D
/// tensor; frames beyond 256 are dropped. Throws TooManyCoefficients (> 256).
FeatureTensor assemble_tensor(std::span<const FeaturePlane> planes, std::size_t rows = kTensorRows,
                              std::size_t cols = kTensorCols);

struct ChannelStats {
  double mean = 0.0;
  double stddev = 1.0;
};

/// Running per-channel mean / population sigma over tensors' valid regions.
class StatsAccumulator {
 public:
  void add(const FeatureTensor& t);
  std::vector<ChannelStats> finish() const;

 private:
  std::vector<double> sum_, sum_sq_;
  std::vector<std::size_t> count_;
};

/// (x - mean) / sigma inside the valid region; padding stays exactly 0.
/// Sigma below 1e-12 is treated as 1.
FeatureTensor normalize_tensor(const FeatureTensor& t, std::span<const ChannelStats> stats);

/// "FCF1" + u32 rows, cols, channels + little-endian float32 payload.
void write_features(const std::filesystem::path& path, const FeatureTensor& t);
/// The valid region is recovered as the bounding box of non-zero entries.
FeatureTensor read_features(const std::filesystem::path& path);

/// Full MFCC / FC extraction for one utterance.
class FeatureExtractor {
 public:
  FeatureExtractor(const FeatureConfig& cfg, int sample_rate_hz);

  const FeatureConfig& config() const noexcept { return cfg_; }
  const MelFilterbank& filterbank() const noexcept { return fb_; }

  std::vector<MfccVector> mfcc_frames(const AudioBuffer& audio) const;
  std::vector<FcVector> fc_frames(const AudioBuffer& audio) const;

  /// Tensor with the configured channels (MFCC first when both).
  FeatureTensor extract(const AudioBuffer& audio) const;

 private:
  FeatureConfig cfg_;
  int sample_rate_hz_;
  MelFilterbank fb_;
};

}  // namespace fcwr
