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


#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fcwr/melbank.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

TEST_CASE("mel scale values") {
  CHECK(fcwr::hz_to_mel(0.0) == 0.0);
  CHECK(fcwr::hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-15));
  CHECK(fcwr::hz_to_mel(700.0) == doctest::Approx(781.17).epsilon(1e-5));
  CHECK(fcwr::hz_to_mel(8000.0) == doctest::Approx(2840.03).epsilon(1e-5));
  CHECK(fcwr::mel_to_hz(0.0) == 0.0);
  CHECK(fcwr::mel_to_hz(781.17) == doctest::Approx(700.0).epsilon(1e-4));
  CHECK(std::abs(fcwr::mel_to_hz(fcwr::hz_to_mel(1234.5)) - 1234.5) < 1e-9);
  CHECK_ERROR_CODE(fcwr::hz_to_mel(-1.0), NegativeFrequency);
  CHECK_ERROR_CODE(fcwr::mel_to_hz(-0.5), NegativeMel);
}

TEST_CASE("mel round trip on random frequencies") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 8000.0);
  for (int i = 0; i < 1000; ++i) {
    const double f = u(gen);
    CHECK(std::abs(fcwr::mel_to_hz(fcwr::hz_to_mel(f)) - f) < 1e-9);
    CHECK(fcwr::hz_to_mel(f) == doctest::Approx(oracle::mel(f)).epsilon(1e-14));
  }
}

TEST_CASE("default filterbank geometry") {
  const auto fb = fcwr::MelFilterbank::build(24, 0.0, 8000.0, 512, 16000);
  const auto e = fb.edges_hz();
  REQUIRE(e.size() == 26);
  CHECK(e.front() == 0.0);
  CHECK(e.back() == 8000.0);
  CHECK(fb.num_bins() == 257);
  CHECK(fb.bin_hz() == 31.25);
  const double spacing = fcwr::hz_to_mel(8000.0) / 25.0;
  CHECK(spacing == doctest::Approx(113.60).epsilon(1e-4));
  const auto ref = oracle::edges(24, 0.0, 8000.0);
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    CHECK(e[i] < e[i + 1]);
    CHECK(std::abs(fcwr::hz_to_mel(e[i + 1]) - fcwr::hz_to_mel(e[i]) - spacing) < 1e-9);
    CHECK(e[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
  // Nyquist default.
  CHECK(fcwr::MelFilterbank::build(fcwr::FilterbankParams{}).edges_hz().back() == 8000.0);
}

TEST_CASE("filter rows are sampled unity-peak triangles") {
  const auto fb = fcwr::MelFilterbank::build(fcwr::FilterbankParams{});
  const auto e = oracle::edges(24, 0.0, 8000.0);
  for (int k = 0; k < 24; ++k) {
    CHECK(fb.response(k, fb.center(k)) == 1.0);
    const auto row = fb.row(k);
    std::size_t argmax = 0;
    for (std::size_t b = 0; b < row.size(); ++b) {
      const double f = static_cast<double>(b) * 31.25;
      CHECK(row[b] == doctest::Approx(oracle::triangle(e[k], e[k + 1], e[k + 2], f)).epsilon(1e-12));
      if (row[b] != 0.0) {
        CHECK(f > fb.lower_edge(k));
        CHECK(f < fb.upper_edge(k));
      }
      if (row[b] > row[argmax]) argmax = b;
    }
    // The sampled maximum sits on a bin next to the centre.
    CHECK(row[argmax] <= 1.0);
    CHECK(std::abs(static_cast<double>(argmax) * 31.25 - fb.center(k)) < 31.25);
  }
}

TEST_CASE("two filters with centres on bins") {
  // fs = 11200, fft 512 gives 21.875 Hz bins; with f_max 4900 the mel-uniform
  // centres land on 700 Hz (bin 32) and 2100 Hz (bin 96).
  const auto fb = fcwr::MelFilterbank::build(2, 0.0, 4900.0, 512, 11200);
  CHECK(fb.center(0) == doctest::Approx(700.0).epsilon(1e-12));
  CHECK(fb.center(1) == doctest::Approx(2100.0).epsilon(1e-12));
  CHECK(fb.row(0)[32] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fb.row(0)[96] == 0.0);
  CHECK(fb.row(1)[96] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fb.row(1)[32] == 0.0);
}

TEST_CASE("adjacent filters crossfade to one") {
  const auto fb = fcwr::MelFilterbank::build(fcwr::FilterbankParams{});
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(fb.center(0), fb.center(23));
  for (int i = 0; i < 1000; ++i) {
    const double f = u(gen);
    double total = 0.0;
    for (int k = 0; k < 24; ++k) total += fb.response(k, f);
    CHECK(std::abs(total - 1.0) < 1e-6);
  }
  // Same on the sampled grid for bins between the first and last centres.
  for (std::size_t b = 0; b < fb.num_bins(); ++b) {
    const double f = static_cast<double>(b) * fb.bin_hz();
    if (f < fb.center(0) || f > fb.center(23)) continue;
    double total = 0.0;
    for (int k = 0; k < 24; ++k) total += fb.row(k)[b];
    CHECK(std::abs(total - 1.0) < 1e-6);
  }
}

TEST_CASE("filterbank argument errors") {
  CHECK_ERROR_CODE(fcwr::MelFilterbank::build(24, 4000.0, 1000.0, 512, 16000), InvalidRange);
  CHECK_ERROR_CODE(fcwr::MelFilterbank::build(24, 0.0, 9000.0, 512, 16000), InvalidRange);
  CHECK_ERROR_CODE(fcwr::MelFilterbank::build(24, -5.0, 8000.0, 512, 16000), InvalidRange);
  CHECK_ERROR_CODE(fcwr::MelFilterbank::build(1, 0.0, 8000.0, 512, 16000), TooFewFilters);
  CHECK_ERROR_CODE(fcwr::MelFilterbank::build(128, 0.0, 8000.0, 512, 16000), TooFewBins);
}

TEST_CASE("edge monotonicity across configurations") {
  for (int K : {2, 8, 24, 40}) {
    for (double fmax : {4000.0, 8000.0}) {
      const auto fb = fcwr::MelFilterbank::build(K, 100.0, fmax, 1024, 16000);
      const auto e = fb.edges_hz();
      for (std::size_t i = 0; i + 1 < e.size(); ++i) CHECK(e[i] < e[i + 1]);
    }
  }
}

TEST_CASE("csv dump has one row per filter") {
  const auto fb = fcwr::MelFilterbank::build(fcwr::FilterbankParams{});
  std::istringstream in(fb.to_csv());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::size_t commas = 0;
    for (char c : line) commas += c == ',';
    CHECK(commas == 256);
    ++rows;
  }
  CHECK(rows == 24);
}
