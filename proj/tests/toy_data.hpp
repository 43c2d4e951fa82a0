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


// Five visually distinct texture classes for classifier tests.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "fcwr/cnn.hpp"
#include "fcwr/features.hpp"

namespace toy {

inline float pattern(int cls, std::size_t r, std::size_t c) {
  switch (cls) {
    case 0: return (r / 2) % 2 ? 1.0f : -1.0f;            // horizontal stripes
    case 1: return (c / 2) % 2 ? 1.0f : -1.0f;            // vertical stripes
    case 2: return (r + c) % 2 ? 1.0f : -1.0f;            // checkerboard
    case 3: return ((r + c) / 3) % 2 ? 1.0f : -1.0f;      // diagonal bands
    default: return (r % 4 == 0 && c % 4 == 0) ? 2.0f : 0.0f;  // dots
  }
}

// Pattern over a rows_used x cols_used top-left region plus small noise.
inline fcwr::FeatureTensor sample(int cls, std::uint64_t variant, std::size_t rows, std::size_t cols,
                                  std::size_t channels, std::size_t rows_used, std::size_t cols_used) {
  fcwr::FeatureTensor t(rows, cols, channels);
  std::mt19937_64 gen(variant * 7919 + static_cast<std::uint64_t>(cls));
  std::normal_distribution<float> noise(0.0f, 0.1f);
  for (std::size_t r = 0; r < rows_used; ++r)
    for (std::size_t c = 0; c < cols_used; ++c)
      for (std::size_t ch = 0; ch < channels; ++ch) t.at(r, c, ch) = pattern(cls, r, c + ch) + noise(gen);
  t.set_valid_region(rows_used, cols_used);
  return t;
}

struct Set {
  std::vector<fcwr::FeatureTensor> tensors;
  std::vector<fcwr::Example> examples;
};

inline Set make_set(std::size_t per_class, std::uint64_t seed, const fcwr::CnnConfig& cfg, std::size_t rows_used,
                    std::size_t cols_used) {
  Set s;
  for (std::size_t i = 0; i < per_class; ++i)
    for (int cls = 0; cls < static_cast<int>(cfg.num_classes); ++cls)
      s.tensors.push_back(sample(cls, seed * 1000 + i, cfg.height, cfg.width, cfg.channels, rows_used, cols_used));
  for (std::size_t i = 0; i < s.tensors.size(); ++i)
    s.examples.push_back({&s.tensors[i], static_cast<int>(i % cfg.num_classes)});
  return s;
}

}  // namespace toy
