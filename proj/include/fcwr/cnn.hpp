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


// Two-stage convolutional word classifier:
//
//   input H x W x D
//   -> conv 3x3 (32) + ReLU -> max-pool 4x4
//   -> conv 3x3 (64) + ReLU -> max-pool 4x4
//   -> global average pool -> dense (n_classes) -> softmax
//
// Forward and backward passes are written out explicitly; the network is a
// template over the arithmetic type so gradient checks can run in double
// while training and checkpoints use float.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fcwr/features.hpp"

namespace fcwr {

struct CnnConfig {
  std::size_t height = kTensorRows;
  std::size_t width = kTensorCols;
  std::size_t channels = 1;
  std::size_t conv1_filters = 32;
  std::size_t conv2_filters = 64;
  std::size_t kernel = 3;
  std::size_t pool = 4;
  std::size_t num_classes = 5;
  std::uint64_t seed = 0;

  /// 32 x 32 x 1 variant for gradient checks and fast unit tests.
  static CnnConfig reduced(std::uint64_t seed = 0);

  /// Throws InvalidConfig when the geometry is unusable.
  void validate() const;
  std::size_t parameter_count() const;

  friend bool operator==(const CnnConfig&, const CnnConfig&) = default;
};

/// Named slices of the flat parameter vector, in declaration order.
enum class ParamBlock { conv1_weight, conv1_bias, conv2_weight, conv2_bias, dense_weight, dense_bias };
inline constexpr int kParamBlockCount = 6;

struct BlockRange {
  std::size_t offset = 0;
  std::size_t size = 0;
};

BlockRange block_range(const CnnConfig& cfg, ParamBlock block);
std::string to_string(ParamBlock block);

template <typename Real>
class ConvNet {
 public:
  /// He-uniform weights drawn from cfg.seed; zero biases.
  explicit ConvNet(const CnnConfig& cfg);

  const CnnConfig& config() const noexcept { return cfg_; }

  std::span<Real> parameters() noexcept { return params_; }
  std::span<const Real> parameters() const noexcept { return params_; }
  std::span<Real> block(ParamBlock b);
  std::span<const Real> block(ParamBlock b) const;

  /// Pre-softmax scores. Throws ShapeMismatch.
  std::vector<double> logits(const FeatureTensor& input) const;

  /// Softmax probabilities.
  std::vector<double> forward(const FeatureTensor& input) const;

  /// Cross-entropy loss for `target`; writes dLoss/dParams into `grad`
  /// (overwritten, same layout as parameters()).
  double backward(const FeatureTensor& input, int target, std::span<Real> grad) const;

  /// Piecewise-linear regime of the network at `input`: every max-pool winner
  /// index and whether that winner passed its ReLU. Two parameter vectors with
  /// the same pattern lie on the same smooth piece.
  std::vector<std::uint32_t> activation_pattern(const FeatureTensor& input) const;

  template <typename Other>
  ConvNet<Other> cast() const {
    ConvNet<Other> out(cfg_);
    auto dst = out.parameters();
    for (std::size_t i = 0; i < params_.size(); ++i) dst[i] = static_cast<Other>(params_[i]);
    return out;
  }

 private:
  struct Activations;
  void run_forward(const FeatureTensor& input, Activations& act) const;

  CnnConfig cfg_;
  std::vector<Real> params_;
};

extern template class ConvNet<float>;
extern template class ConvNet<double>;

using CnnModel = ConvNet<float>;

std::vector<double> softmax(std::span<const double> logits);

/// argmax with ties resolved toward the lowest class index.
int argmax(std::span<const double> scores);

/// "FCM1", config block, then parameters as little-endian float32.
void save_model(const std::filesystem::path& path, const CnnModel& model);
CnnModel load_model(const std::filesystem::path& path);

struct Example {
  const FeatureTensor* tensor = nullptr;
  int label = 0;
};

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 8;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;  // shuffle order

  void validate() const;
};

struct TrainResult {
  CnnModel model;
  std::vector<double> loss_history;  // mean training loss per epoch
};

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

/// Checked after every epoch; returning true ends training early.
using StopCondition = std::function<bool(std::size_t epoch, const CnnModel& model)>;

/// Adam on mean cross-entropy over seeded-shuffled mini-batches.
/// Throws EmptyDataset, ShapeMismatch, InvalidLabel.
TrainResult train(const CnnModel& initial, std::span<const Example> data, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {}, const StopCondition& stop = {});

struct EvalReport {
  std::string condition;  // "clean" or "<noise>@<snr>dB"
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]

  std::size_t total() const;
  std::size_t correct() const;
  double accuracy() const;
};

EvalReport report_from_predictions(std::size_t num_classes, std::span<const int> truth,
                                   std::span<const int> predicted, std::string condition);

int predict(const CnnModel& model, const FeatureTensor& input);

/// Throws EmptyDataset.
EvalReport evaluate(const CnnModel& model, std::span<const Example> data, std::string condition);

struct GradientCheckResult {
  std::size_t coordinates = 0;  // coordinates compared
  std::size_t kinks = 0;        // coordinates whose +-step straddled a kink
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

enum class KinkPolicy {
  include,  // compare every drawn coordinate
  redraw,   // replace coordinates whose central difference crosses a ReLU or
            // max-pool switch, where the two-sided difference is not an oracle
};

/// Compares backprop against central differences (double precision) on
/// `samples` parameter coordinates drawn with `seed`. Relative error is
/// |a - n| / max(|a|, |n|, 1e-8).
GradientCheckResult gradient_check(const ConvNet<double>& net, const FeatureTensor& input, int target,
                                   std::size_t samples, double step, std::uint64_t seed,
                                   KinkPolicy policy = KinkPolicy::include);

}  // namespace fcwr
