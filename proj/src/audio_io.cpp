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


#include "fcwr/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "fcwr/detail/csv.hpp"
#include "fcwr/detail/little_endian.hpp"
#include "fcwr/error.hpp"

namespace fcwr {

namespace {

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool tag_is(const unsigned char* p, const char* tag) { return std::equal(p, p + 4, tag); }

}  // namespace

AudioBuffer load_wav(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const auto corrupt = [&](const std::string& why) {
    return Error(ErrorCode::CorruptFile, path.string() + ": " + why);
  };
  if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE")) {
    throw corrupt("missing RIFF/WAVE header");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = detail::get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) {
      // Some writers leave a streaming placeholder in the data size field.
      if (tag_is(chunk, "data")) {
        data = bytes.data() + body;
        data_size = bytes.size() - body;
        break;
      }
      throw corrupt("chunk extends past end of file");
    }
    if (tag_is(chunk, "fmt ")) {
      if (size < 16) throw corrupt("fmt chunk too small");
      format = detail::get_u16(chunk + 8);
      channels = detail::get_u16(chunk + 10);
      rate = detail::get_u32(chunk + 12);
      bits = detail::get_u16(chunk + 22);
      have_fmt = true;
    } else if (tag_is(chunk, "data")) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw corrupt("no fmt chunk");
  if (data == nullptr) throw corrupt("no data chunk");

  std::vector<std::string> problems;
  if (format != 1) problems.push_back("format_code=" + std::to_string(format) + " (need 1, PCM)");
  if (bits != 16) problems.push_back("bits_per_sample=" + std::to_string(bits) + " (need 16)");
  if (channels != 1) problems.push_back("channels=" + std::to_string(channels) + " (need 1)");
  if (rate != static_cast<std::uint32_t>(kSampleRateHz)) {
    problems.push_back("sample_rate=" + std::to_string(rate) + " (need 16000)");
  }
  if (!problems.empty()) {
    std::string msg = path.string() + ":";
    for (const auto& p : problems) msg += " " + p;
    throw Error(ErrorCode::UnsupportedFormat, msg);
  }

  AudioBuffer audio;
  audio.sample_rate_hz = kSampleRateHz;
  const std::size_t count = data_size / 2;
  audio.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto raw = static_cast<std::int16_t>(detail::get_u16(data + 2 * i));
    audio.samples[i] = static_cast<double>(raw) / 32768.0;
  }
  return audio;
}

void save_wav(const std::filesystem::path& path, const AudioBuffer& audio) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  const auto rate = static_cast<std::uint32_t>(audio.sample_rate_hz);
  out.write("RIFF", 4);
  detail::put_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);  // PCM
  detail::put_u16(out, 1);  // mono
  detail::put_u32(out, rate);
  detail::put_u32(out, rate * 2);
  detail::put_u16(out, 2);
  detail::put_u16(out, 16);
  out.write("data", 4);
  detail::put_u32(out, data_bytes);
  for (double x : audio.samples) {
    const double scaled = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
    detail::put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string to_string(Split split) { return split == Split::train ? "train" : "test"; }

Split parse_split(const std::string& text) {
  if (text == "train") return Split::train;
  if (text == "test") return Split::test;
  throw Error(ErrorCode::UnknownSplit, "split '" + text + "' is not one of {train,test}");
}

int DatasetManifest::class_index(const std::string& word) const {
  const auto it = std::find(vocabulary.begin(), vocabulary.end(), word);
  return it == vocabulary.end() ? -1 : static_cast<int>(it - vocabulary.begin());
}

DatasetManifest load_manifest(const std::filesystem::path& path,
                              const std::optional<std::vector<std::string>>& vocabulary) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open manifest " + path.string());
  const auto base = path.parent_path();

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedManifest, path.string() + ": missing header");
  }
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "path,word,accent,split") {
    throw Error(ErrorCode::MalformedManifest,
                path.string() + ": header must be exactly 'path,word,accent,split', got '" + line + "'");
  }

  DatasetManifest manifest;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    const std::string where = path.string() + " row " + std::to_string(row);
    if (fields.size() != 4) {
      throw Error(ErrorCode::MalformedManifest,
                  where + ": expected 4 columns, found " + std::to_string(fields.size()));
    }
    UtteranceRecord rec;
    rec.row = row;
    rec.path = std::filesystem::path(fields[0]).is_absolute() ? std::filesystem::path(fields[0])
                                                              : base / fields[0];
    rec.word = fields[1];
    rec.accent = fields[2];
    try {
      rec.split = parse_split(fields[3]);
    } catch (const Error&) {
      throw Error(ErrorCode::UnknownSplit, where + ": split '" + fields[3] + "' is not one of {train,test}");
    }
    if (rec.word.empty() || rec.accent.empty()) {
      throw Error(ErrorCode::MalformedManifest, where + ": empty word or accent");
    }
    if (!std::filesystem::exists(rec.path)) {
      throw Error(ErrorCode::MissingFile, where + ": " + rec.path.string() + " does not exist");
    }
    if (std::find(manifest.accents.begin(), manifest.accents.end(), rec.accent) == manifest.accents.end()) {
      manifest.accents.push_back(rec.accent);
    }
    manifest.records.push_back(std::move(rec));
  }

  if (vocabulary) {
    manifest.vocabulary = *vocabulary;
    for (std::size_t i = 0; i < manifest.records.size(); ++i) {
      if (manifest.class_index(manifest.records[i].word) < 0) {
        throw Error(ErrorCode::UnknownWord,
                    "word '" + manifest.records[i].word + "' is not in the configured vocabulary");
      }
    }
  } else {
    std::set<std::string> words;
    for (const auto& r : manifest.records) words.insert(r.word);
    manifest.vocabulary.assign(words.begin(), words.end());
  }

  // Balance: per (accent, split), every vocabulary word has the same count.
  std::map<std::pair<std::string, Split>, std::map<std::string, std::size_t>> counts;
  for (const auto& r : manifest.records) ++counts[{r.accent, r.split}][r.word];
  for (const auto& [key, per_word] : counts) {
    const std::size_t expected = per_word.begin()->second;
    for (const auto& word : manifest.vocabulary) {
      const auto it = per_word.find(word);
      const std::size_t n = it == per_word.end() ? 0 : it->second;
      if (n != expected) {
        std::ostringstream msg;
        msg << "accent '" << key.first << "' split " << to_string(key.second) << ": word '" << word
            << "' has " << n << " utterances, word '" << per_word.begin()->first << "' has " << expected;
        throw Error(ErrorCode::ImbalancedDataset, msg.str());
      }
    }
  }
  return manifest;
}

}  // namespace fcwr
