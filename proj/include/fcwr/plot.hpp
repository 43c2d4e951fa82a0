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

#include <filesystem>
#include <vector>

namespace fcwr {

/// Renders accuracy-vs-SNR line plots from a results CSV, one SVG per
/// (accent, noise) pair with one series per feature set. Clean rows are drawn
/// as a dashed reference line. Returns the files written.
std::vector<std::filesystem::path> write_snr_plots(const std::filesystem::path& results_csv,
                                                   const std::filesystem::path& out_dir);

}  // namespace fcwr
