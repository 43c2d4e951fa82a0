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


#include "fcwr/melbank.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fcwr/error.hpp"

namespace fcwr {

double hz_to_mel(double hz) {
  if (hz < 0.0) throw Error(ErrorCode::NegativeFrequency, "frequency " + std::to_string(hz) + " Hz < 0");
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel) {
  if (mel < 0.0) throw Error(ErrorCode::NegativeMel, "mel value " + std::to_string(mel) + " < 0");
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank MelFilterbank::build(int num_filters, double f_min_hz, double f_max_hz, std::size_t fft_size,
                                   int sample_rate_hz) {
  return build(FilterbankParams{num_filters, f_min_hz, f_max_hz, fft_size, sample_rate_hz});
}

MelFilterbank MelFilterbank::build(const FilterbankParams& params) {
  if (params.num_filters < 2) {
    throw Error(ErrorCode::TooFewFilters, "need at least 2 filters, got " + std::to_string(params.num_filters));
  }
  if (params.sample_rate_hz <= 0 || params.fft_size < 2) {
    throw Error(ErrorCode::InvalidRange, "sample rate and fft_size must be positive");
  }
  const double nyquist = params.sample_rate_hz / 2.0;
  const double f_max = params.f_max_hz < 0.0 ? nyquist : params.f_max_hz;
  if (!(params.f_min_hz >= 0.0) || !(params.f_min_hz < f_max) || f_max > nyquist) {
    throw Error(ErrorCode::InvalidRange, "need 0 <= f_min < f_max <= " + std::to_string(nyquist) +
                                             ", got f_min=" + std::to_string(params.f_min_hz) +
                                             " f_max=" + std::to_string(f_max));
  }

  MelFilterbank fb;
  fb.params_ = params;
  fb.params_.f_max_hz = f_max;
  fb.num_filters_ = params.num_filters;
  fb.num_bins_ = params.fft_size / 2 + 1;
  fb.bin_hz_ = static_cast<double>(params.sample_rate_hz) / static_cast<double>(params.fft_size);

  const int n_edges = params.num_filters + 2;
  const double mel_lo = hz_to_mel(params.f_min_hz);
  const double mel_hi = hz_to_mel(f_max);
  const double step = (mel_hi - mel_lo) / (n_edges - 1);
  fb.edges_.resize(static_cast<std::size_t>(n_edges));
  for (int i = 0; i < n_edges; ++i) fb.edges_[static_cast<std::size_t>(i)] = mel_to_hz(mel_lo + step * i);
  fb.edges_.front() = params.f_min_hz;
  fb.edges_.back() = f_max;

  fb.weights_.assign(static_cast<std::size_t>(fb.num_filters_) * fb.num_bins_, 0.0);
  for (int k = 0; k < fb.num_filters_; ++k) {
    std::size_t nonzero = 0;
    double* row = fb.weights_.data() + static_cast<std::size_t>(k) * fb.num_bins_;
    for (std::size_t b = 0; b < fb.num_bins_; ++b) {
      row[b] = fb.response(k, static_cast<double>(b) * fb.bin_hz_);
      if (row[b] > 0.0) ++nonzero;
    }
    if (nonzero == 0) {
      throw Error(ErrorCode::TooFewBins, "filter " + std::to_string(k) + " (" + std::to_string(fb.lower_edge(k)) +
                                             "-" + std::to_string(fb.upper_edge(k)) +
                                             " Hz) covers no FFT bin; reduce K or raise fft_size");
    }
  }
  return fb;
}

double MelFilterbank::response(int k, double hz) const {
  const double lo = lower_edge(k);
  const double mid = center(k);
  const double hi = upper_edge(k);
  if (hz <= lo || hz >= hi) return 0.0;
  if (hz == mid) return 1.0;
  return hz < mid ? (hz - lo) / (mid - lo) : (hi - hz) / (hi - mid);
}

std::string MelFilterbank::to_csv() const {
  std::ostringstream out;
  char buf[32];
  for (int k = 0; k < num_filters_; ++k) {
    const auto r = row(k);
    for (std::size_t b = 0; b < r.size(); ++b) {
      std::snprintf(buf, sizeof buf, "%.17g", r[b]);
      if (b) out << ',';
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace fcwr
