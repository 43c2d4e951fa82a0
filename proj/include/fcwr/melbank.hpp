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
#include <span>
#include <string>
#include <vector>

namespace fcwr {

/// 2595 * log10(1 + f / 700). Throws NegativeFrequency for f < 0.
double hz_to_mel(double hz);

/// 700 * (10^(m / 2595) - 1). Throws NegativeMel for m < 0.
double mel_to_hz(double mel);

struct FilterbankParams {
  int num_filters = 24;
  double f_min_hz = 0.0;
  double f_max_hz = -1.0;  // negative selects Nyquist
  std::size_t fft_size = 512;
  int sample_rate_hz = 16000;
};

/// K unity-peak triangular filters with edges uniform on the Mel scale.
///
/// Filter k (0-based) rises from edges[k] to 1 at edges[k + 1] and falls back
/// to 0 at edges[k + 2]. Weights are the triangles sampled at FFT bin centres.
class MelFilterbank {
 public:
  /// Throws TooFewFilters (K < 2), InvalidRange, or TooFewBins when some
  /// filter covers no bin.
  static MelFilterbank build(const FilterbankParams& params);
  static MelFilterbank build(int num_filters, double f_min_hz, double f_max_hz, std::size_t fft_size,
                             int sample_rate_hz);

  int num_filters() const noexcept { return num_filters_; }
  std::size_t num_bins() const noexcept { return num_bins_; }
  double bin_hz() const noexcept { return bin_hz_; }
  const FilterbankParams& params() const noexcept { return params_; }

  /// K + 2 band edges f_0 < ... < f_{K+1}.
  std::span<const double> edges_hz() const noexcept { return edges_; }
  double lower_edge(int k) const { return edges_[static_cast<std::size_t>(k)]; }
  double center(int k) const { return edges_[static_cast<std::size_t>(k) + 1]; }
  double upper_edge(int k) const { return edges_[static_cast<std::size_t>(k) + 2]; }

  std::span<const double> row(int k) const {
    return {weights_.data() + static_cast<std::size_t>(k) * num_bins_, num_bins_};
  }

  /// Continuous triangle response of filter k at frequency hz.
  double response(int k, double hz) const;

  /// K rows of num_bins comma-separated weights.
  std::string to_csv() const;

 private:
  FilterbankParams params_;
  int num_filters_ = 0;
  std::size_t num_bins_ = 0;
  double bin_hz_ = 0.0;
  std::vector<double> edges_;
  std::vector<double> weights_;  // row-major K x num_bins
};

}  // namespace fcwr
