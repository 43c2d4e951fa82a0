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


#include "fcwr/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "fcwr/error.hpp"
#include "fcwr/pipeline.hpp"

namespace fcwr {

namespace {

constexpr double kWidth = 480, kHeight = 320, kLeft = 60, kRight = 130, kTop = 30, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::vector<std::filesystem::path> write_snr_plots(const std::filesystem::path& results_csv,
                                                   const std::filesystem::path& out_dir) {
  const auto records = read_results(results_csv);
  std::map<std::pair<std::string, std::string>, std::map<std::string, std::vector<std::pair<double, double>>>> curves;
  std::map<std::pair<std::string, std::string>, double> clean;  // (accent, features) -> accuracy
  for (const auto& r : records) {
    if (r.snr_db) {
      curves[{r.accent, r.noise}][r.features].push_back({*r.snr_db, r.accuracy});
    } else {
      clean[{r.accent, r.features}] = r.accuracy;
    }
  }

  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (auto& [key, series] : curves) {
    double lo = 1e300, hi = -1e300;
    for (auto& [name, pts] : series) {
      std::sort(pts.begin(), pts.end());
      lo = std::min(lo, pts.front().first);
      hi = std::max(hi, pts.back().first);
    }
    if (hi <= lo) hi = lo + 1.0;
    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    const auto px = [&](double snr) { return kLeft + (snr - lo) / (hi - lo) * plot_w; };
    const auto py = [&](double acc) { return kTop + (1.0 - acc) * plot_h; };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
                      fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(kLeft) + "\" y=\"18\">" + key.first + " / " + key.second + " noise</text>\n";
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(kLeft + plot_w) + "\" y2=\"" +
           fmt(py(0)) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(py(1)) +
           "\" stroke=\"black\"/>\n";
    for (double a = 0.0; a <= 1.0001; a += 0.25) {
      svg += "<text x=\"" + fmt(kLeft - 36) + "\" y=\"" + fmt(py(a) + 4) + "\">" + fmt(a) + "</text>\n";
    }
    std::set<double> ticks;
    for (const auto& [name, pts] : series) {
      for (const auto& p : pts) ticks.insert(p.first);
    }
    for (double t : ticks) {
      svg += "<text x=\"" + fmt(px(t) - 8) + "\" y=\"" + fmt(py(0) + 18) + "\">" + fmt(t) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(kLeft + plot_w / 2 - 24) + "\" y=\"" + fmt(kHeight - 8) + "\">SNR (dB)</text>\n";

    std::size_t color = 0;
    for (const auto& [name, pts] : series) {
      const char* c = kColors[color++ % 4];
      std::string poly;
      for (const auto& [snr, acc] : pts) poly += fmt(px(snr)) + "," + fmt(py(acc)) + " ";
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(c) + "\" stroke-width=\"2\" points=\"" + poly +
             "\"/>\n";
      for (const auto& [snr, acc] : pts) {
        svg += "<circle cx=\"" + fmt(px(snr)) + "\" cy=\"" + fmt(py(acc)) + "\" r=\"3\" fill=\"" + c + "\"/>\n";
      }
      const auto ref = clean.find({key.first, name});
      if (ref != clean.end()) {
        svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py(ref->second)) + "\" x2=\"" + fmt(kLeft + plot_w) +
               "\" y2=\"" + fmt(py(ref->second)) + "\" stroke=\"" + c + "\" stroke-dasharray=\"4 3\"/>\n";
      }
      const double ly = kTop + 16.0 * static_cast<double>(color);
      svg += "<line x1=\"" + fmt(kWidth - kRight + 10) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
             fmt(kWidth - kRight + 30) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + c + "\" stroke-width=\"2\"/>\n";
      svg += "<text x=\"" + fmt(kWidth - kRight + 35) + "\" y=\"" + fmt(ly + 4) + "\">" + name + "</text>\n";
    }
    svg += "</svg>\n";

    const auto path = out_dir / (key.first + "_" + key.second + ".svg");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << svg;
    written.push_back(path);
  }
  return written;
}

}  // namespace fcwr
