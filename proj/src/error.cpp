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


#include "fcwr/error.hpp"

namespace fcwr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedManifest: return "MalformedManifest";
    case ErrorCode::ImbalancedDataset: return "ImbalancedDataset";
    case ErrorCode::UnknownSplit: return "UnknownSplit";
    case ErrorCode::UnknownWord: return "UnknownWord";
    case ErrorCode::EmptySignal: return "EmptySignal";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::FrameTooLong: return "FrameTooLong";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NegativeFrequency: return "NegativeFrequency";
    case ErrorCode::NegativeMel: return "NegativeMel";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::TooFewBins: return "TooFewBins";
    case ErrorCode::TooFewFilters: return "TooFewFilters";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooManyCoefficients: return "TooManyCoefficients";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SilentClean: return "SilentClean";
    case ErrorCode::SilentNoise: return "SilentNoise";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace fcwr
