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


#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "fcwr/audio_io.hpp"
#include "test_util.hpp"

namespace {

void put16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}
void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Hand-rolled RIFF writer so format errors can be produced on purpose.
std::string wav_bytes(const std::vector<std::int16_t>& pcm, std::uint16_t channels = 1, std::uint32_t rate = 16000,
                      std::uint16_t bits = 16, std::uint16_t format = 1) {
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(pcm.size() * 2);
  std::string s = "RIFF";
  put32(s, 36 + data_bytes);
  s += "WAVEfmt ";
  put32(s, 16);
  put16(s, format);
  put16(s, channels);
  put32(s, rate);
  put32(s, rate * channels * bits / 8);
  put16(s, static_cast<std::uint16_t>(channels * bits / 8));
  put16(s, bits);
  s += "data";
  put32(s, data_bytes);
  for (auto v : pcm) put16(s, static_cast<std::uint16_t>(v));
  return s;
}

std::string error_message(const std::filesystem::path& p) {
  try {
    fcwr::load_wav(p);
  } catch (const fcwr::Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("load_wav scales int16 by 1/32768") {
  testutil::TempDir dir("wav");
  testutil::write_text(dir / "a.wav", wav_bytes({16384, -16384}));
  const auto a = fcwr::load_wav(dir / "a.wav");
  CHECK(a.sample_rate_hz == 16000);
  REQUIRE(a.samples.size() == 2);
  CHECK(a.samples[0] == 0.5);
  CHECK(a.samples[1] == -0.5);

  testutil::write_text(dir / "z.wav", wav_bytes({0, 0, 0}));
  CHECK(fcwr::load_wav(dir / "z.wav").samples == std::vector<double>{0.0, 0.0, 0.0});

  testutil::write_text(dir / "x.wav", wav_bytes({-32768, 32767}));
  const auto x = fcwr::load_wav(dir / "x.wav");
  CHECK(x.samples[0] == -1.0);
  CHECK(x.samples[1] < 1.0);
}

TEST_CASE("load_wav names every unsupported property") {
  testutil::TempDir dir("wav");
  testutil::write_text(dir / "s.wav", wav_bytes({1, 2, 3, 4}, 2, 44100));
  CHECK_ERROR_CODE(fcwr::load_wav(dir / "s.wav"), UnsupportedFormat);
  const auto msg = error_message(dir / "s.wav");
  CHECK(msg.find("channels") != std::string::npos);
  CHECK(msg.find("sample_rate") != std::string::npos);

  testutil::write_text(dir / "b.wav", wav_bytes({1, 2}, 1, 16000, 8));
  CHECK(error_message(dir / "b.wav").find("bits_per_sample") != std::string::npos);
  testutil::write_text(dir / "f.wav", wav_bytes({1, 2}, 1, 16000, 16, 3));
  CHECK_ERROR_CODE(fcwr::load_wav(dir / "f.wav"), UnsupportedFormat);
}

TEST_CASE("load_wav rejects malformed containers") {
  testutil::TempDir dir("wav");
  testutil::write_text(dir / "junk.wav", "not a wave file at all, just text padding it out");
  CHECK_ERROR_CODE(fcwr::load_wav(dir / "junk.wav"), CorruptFile);
  auto bytes = wav_bytes({1, 2, 3, 4});
  testutil::write_text(dir / "short.wav", bytes.substr(0, 30));
  CHECK_ERROR_CODE(fcwr::load_wav(dir / "short.wav"), CorruptFile);
  CHECK_ERROR_CODE(fcwr::load_wav(dir / "absent.wav"), MissingFile);
}

TEST_CASE("save then load is within one quantization step") {
  testutil::TempDir dir("wav");
  fcwr::AudioBuffer a;
  a.samples = testutil::random_signal(4000, 3, 0.99);
  fcwr::save_wav(dir / "r.wav", a);
  CHECK(std::filesystem::file_size(dir / "r.wav") == 44 + 2 * a.samples.size());
  const auto b = fcwr::load_wav(dir / "r.wav");
  REQUIRE(b.samples.size() == a.samples.size());
  double worst = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) worst = std::max(worst, std::abs(a.samples[i] - b.samples[i]));
  CHECK(worst <= 1.0 / 32768.0);
  for (double v : b.samples) CHECK(std::abs(v) <= 1.0);
}

namespace {

std::string manifest_rows(const std::string& accent, const std::vector<std::string>& words,
                          const std::vector<int>& train, const std::vector<int>& test) {
  std::string s;
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (int i = 0; i < train[w]; ++i) s += "a.wav," + words[w] + "," + accent + ",train\n";
    for (int i = 0; i < test[w]; ++i) s += "a.wav," + words[w] + "," + accent + ",test\n";
  }
  return s;
}

const std::vector<std::string> kWords = {"kids", "bags", "store", "station", "please"};

}  // namespace

TEST_CASE("manifest with 78 train and 28 test per word") {
  testutil::TempDir dir("man");
  testutil::write_text(dir / "a.wav", wav_bytes({1}));
  testutil::write_text(dir / "m.csv", "path,word,accent,split\n" +
                                          manifest_rows("arabic", kWords, {78, 78, 78, 78, 78}, {28, 28, 28, 28, 28}));
  const auto m = fcwr::load_manifest(dir / "m.csv");
  CHECK(m.records.size() == 530);
  CHECK(m.vocabulary == std::vector<std::string>{"bags", "kids", "please", "station", "store"});
  CHECK(m.accents == std::vector<std::string>{"arabic"});
  CHECK(m.class_index("kids") == 1);
  CHECK(m.class_index("nope") == -1);
  CHECK(m.records.front().path == dir / "a.wav");
  CHECK(m.records.front().row == 2);
  CHECK(m.records.back().split == fcwr::Split::test);
}

TEST_CASE("manifest balance, schema and row errors") {
  testutil::TempDir dir("man");
  testutil::write_text(dir / "a.wav", wav_bytes({1}));
  const std::string header = "path,word,accent,split\n";

  testutil::write_text(dir / "imb.csv",
                       header + manifest_rows("french", kWords, {44, 45, 45, 45, 45}, {5, 5, 5, 5, 5}));
  CHECK_ERROR_CODE(fcwr::load_manifest(dir / "imb.csv"), ImbalancedDataset);

  // Balance is per accent: a different count in another accent is fine.
  testutil::write_text(dir / "two.csv", header + manifest_rows("french", kWords, {3, 3, 3, 3, 3}, {1, 1, 1, 1, 1}) +
                                            manifest_rows("spanish", kWords, {2, 2, 2, 2, 2}, {1, 1, 1, 1, 1}));
  CHECK(fcwr::load_manifest(dir / "two.csv").records.size() == 35);

  testutil::write_text(dir / "empty.csv", header);
  const auto e = fcwr::load_manifest(dir / "empty.csv");
  CHECK(e.records.empty());
  CHECK(e.vocabulary.empty());

  testutil::write_text(dir / "split.csv", header + "a.wav,kids,x,dev\n");
  CHECK_ERROR_CODE(fcwr::load_manifest(dir / "split.csv"), UnknownSplit);

  testutil::write_text(dir / "missing.csv", header + "a.wav,kids,x,train\nnope.wav,kids,x,train\n");
  CHECK_ERROR_CODE(fcwr::load_manifest(dir / "missing.csv"), MissingFile);
  try {
    fcwr::load_manifest(dir / "missing.csv");
  } catch (const fcwr::Error& err) {
    CHECK(std::string(err.what()).find("row 3") != std::string::npos);
  }

  testutil::write_text(dir / "cols.csv", "path,word,accent,split,extra\n");
  CHECK_ERROR_CODE(fcwr::load_manifest(dir / "cols.csv"), MalformedManifest);
  testutil::write_text(dir / "short.csv", header + "a.wav,kids,x\n");
  CHECK_ERROR_CODE(fcwr::load_manifest(dir / "short.csv"), MalformedManifest);

  testutil::write_text(dir / "vocab.csv", header + "a.wav,kids,x,train\n");
  CHECK_ERROR_CODE(fcwr::load_manifest(dir / "vocab.csv", std::vector<std::string>{"bags"}), UnknownWord);
  // A fixed vocabulary defines class order; absent words break the balance.
  CHECK_ERROR_CODE(fcwr::load_manifest(dir / "vocab.csv", std::vector<std::string>{"kids", "bags"}),
                   ImbalancedDataset);
}

TEST_CASE("manifest parse is order preserving") {
  testutil::TempDir dir("man");
  testutil::write_text(dir / "a.wav", wav_bytes({1}));
  testutil::write_text(dir / "b.wav", wav_bytes({1}));
  testutil::write_text(dir / "m.csv",
                       "path,word,accent,split\r\nb.wav,y,acc,train\r\na.wav,x,acc,train\r\n\"b.wav\",x,acc,test\r\n"
                       "a.wav,y,acc,test\r\n");
  const auto m = fcwr::load_manifest(dir / "m.csv");
  REQUIRE(m.records.size() == 4);
  CHECK(m.records[0].word == "y");
  CHECK(m.records[1].path.filename() == "a.wav");
  CHECK(m.records[2].path.filename() == "b.wav");
  CHECK(m.records[3].row == 5);
}
