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


#include "fcwr/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fcwr/detail/little_endian.hpp"
#include "fcwr/error.hpp"
#include "fcwr/random.hpp"

namespace fcwr {

CnnConfig CnnConfig::reduced(std::uint64_t seed) {
  CnnConfig cfg;
  cfg.height = 32;
  cfg.width = 32;
  cfg.channels = 1;
  cfg.seed = seed;
  return cfg;
}

void CnnConfig::validate() const {
  const auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidConfig, "cnn config: " + why); };
  if (channels < 1 || channels > 2) fail("channels must be 1 or 2");
  if (num_classes < 2) fail("need at least 2 classes");
  if (kernel % 2 == 0) fail("kernel size must be odd");
  if (pool < 1) fail("pool size must be positive");
  if (conv1_filters == 0 || conv2_filters == 0) fail("filter counts must be positive");
  const std::size_t span = pool * pool;
  if (height == 0 || width == 0 || height % span != 0 || width % span != 0) {
    fail("input " + std::to_string(height) + "x" + std::to_string(width) + " must be a positive multiple of " +
         std::to_string(span));
  }
}

BlockRange block_range(const CnnConfig& cfg, ParamBlock block) {
  const std::size_t kk = cfg.kernel * cfg.kernel;
  const std::size_t sizes[kParamBlockCount] = {
      cfg.conv1_filters * cfg.channels * kk, cfg.conv1_filters,
      cfg.conv2_filters * cfg.conv1_filters * kk, cfg.conv2_filters,
      cfg.num_classes * cfg.conv2_filters, cfg.num_classes,
  };
  const auto index = static_cast<std::size_t>(block);
  BlockRange r;
  for (std::size_t i = 0; i < index; ++i) r.offset += sizes[i];
  r.size = sizes[index];
  return r;
}

std::size_t CnnConfig::parameter_count() const {
  const auto last = block_range(*this, ParamBlock::dense_bias);
  return last.offset + last.size;
}

std::string to_string(ParamBlock block) {
  switch (block) {
    case ParamBlock::conv1_weight: return "conv1.weight";
    case ParamBlock::conv1_bias: return "conv1.bias";
    case ParamBlock::conv2_weight: return "conv2.weight";
    case ParamBlock::conv2_bias: return "conv2.bias";
    case ParamBlock::dense_weight: return "dense.weight";
    case ParamBlock::dense_bias: return "dense.bias";
  }
  return "?";
}

namespace {

// Same-padded stride-1 convolution over CHW planes, followed by ReLU.
template <typename Real>
void conv_relu_forward(const Real* in, std::size_t C, std::size_t H, std::size_t W, const Real* weight,
                       const Real* bias, std::size_t F, std::size_t K, Real* out) {
  const auto r = static_cast<std::ptrdiff_t>(K / 2);
  const auto Hs = static_cast<std::ptrdiff_t>(H);
  const auto Ws = static_cast<std::ptrdiff_t>(W);
  for (std::size_t o = 0; o < F; ++o) {
    for (std::ptrdiff_t y = 0; y < Hs; ++y) {
      Real* orow = out + (o * H + static_cast<std::size_t>(y)) * W;
      std::fill(orow, orow + W, bias[o]);
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t ky = 0; ky < K; ++ky) {
          const std::ptrdiff_t iy = y + static_cast<std::ptrdiff_t>(ky) - r;
          if (iy < 0 || iy >= Hs) continue;
          const Real* irow = in + (c * H + static_cast<std::size_t>(iy)) * W;
          const Real* wk = weight + ((o * C + c) * K + ky) * K;
          for (std::size_t kx = 0; kx < K; ++kx) {
            const std::ptrdiff_t dx = static_cast<std::ptrdiff_t>(kx) - r;
            const Real w = wk[kx];
            const std::ptrdiff_t x0 = std::max<std::ptrdiff_t>(0, -dx);
            const std::ptrdiff_t x1 = std::min(Ws, Ws - dx);
            const Real* src = irow + dx;
            for (std::ptrdiff_t x = x0; x < x1; ++x) orow[x] += w * src[x];
          }
        }
      }
      for (std::size_t x = 0; x < W; ++x) orow[x] = std::max(orow[x], Real(0));
    }
  }
}

// Accumulates the gradient contribution of one pre-activation z[o][y][x]
// with dL/dz = g into the weights, bias and (optionally) the layer input.
template <typename Real>
void conv_backward_at(const Real* in, std::size_t C, std::size_t H, std::size_t W, const Real* weight,
                      std::size_t K, std::size_t o, std::size_t y, std::size_t x, Real g, Real* dweight,
                      Real* dbias, Real* din) {
  const auto r = static_cast<std::ptrdiff_t>(K / 2);
  const auto Hs = static_cast<std::ptrdiff_t>(H);
  const auto Ws = static_cast<std::ptrdiff_t>(W);
  dbias[o] += g;
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t ky = 0; ky < K; ++ky) {
      const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(y + ky) - r;
      if (iy < 0 || iy >= Hs) continue;
      const std::size_t wbase = ((o * C + c) * K + ky) * K;
      const std::size_t rowbase = (c * H + static_cast<std::size_t>(iy)) * W;
      for (std::size_t kx = 0; kx < K; ++kx) {
        const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(x + kx) - r;
        if (ix < 0 || ix >= Ws) continue;
        const std::size_t at = rowbase + static_cast<std::size_t>(ix);
        dweight[wbase + kx] += g * in[at];
        if (din != nullptr) din[at] += g * weight[wbase + kx];
      }
    }
  }
}

// Backprop through max-pool, ReLU and the convolution that produced
// `activation` (F x H x W). Only pool winners with a live ReLU receive
// gradient, so the convolution gradient is accumulated at those positions.
template <typename Real>
void pool_relu_conv_backward(const Real* dpooled, const std::uint32_t* argmax, const Real* activation,
                             std::size_t F, std::size_t H, std::size_t W, std::size_t P, const Real* in,
                             std::size_t C, const Real* weight, std::size_t K, Real* dweight, Real* dbias,
                             Real* din) {
  const std::size_t pooled = (H / P) * (W / P);
  for (std::size_t o = 0; o < F; ++o) {
    for (std::size_t i = 0; i < pooled; ++i) {
      const Real g = dpooled[o * pooled + i];
      const std::uint32_t at = argmax[o * pooled + i];
      if (g == Real(0) || !(activation[o * H * W + at] > Real(0))) continue;
      conv_backward_at(in, C, H, W, weight, K, o, at / W, at % W, g, dweight, dbias, din);
    }
  }
}

// Non-overlapping P x P max pooling; `argmax` records the winning index
// within each channel plane (first maximum on ties).
template <typename Real>
void maxpool_forward(const Real* in, std::size_t C, std::size_t H, std::size_t W, std::size_t P, Real* out,
                     std::uint32_t* argmax) {
  const std::size_t Ho = H / P, Wo = W / P;
  for (std::size_t c = 0; c < C; ++c) {
    const Real* plane = in + c * H * W;
    for (std::size_t py = 0; py < Ho; ++py) {
      for (std::size_t px = 0; px < Wo; ++px) {
        std::size_t best = py * P * W + px * P;
        for (std::size_t dy = 0; dy < P; ++dy) {
          for (std::size_t dx = 0; dx < P; ++dx) {
            const std::size_t at = (py * P + dy) * W + px * P + dx;
            if (plane[at] > plane[best]) best = at;
          }
        }
        const std::size_t o = (c * Ho + py) * Wo + px;
        out[o] = plane[best];
        argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
}

}  // namespace

template <typename Real>
struct ConvNet<Real>::Activations {
  std::vector<Real> input;  // C x H x W
  std::vector<Real> act1;   // F1 x H x W, post-ReLU
  std::vector<Real> pool1;  // F1 x H/P x W/P
  std::vector<std::uint32_t> arg1;
  std::vector<Real> act2;   // F2 x H/P x W/P
  std::vector<Real> pool2;  // F2 x H/P^2 x W/P^2
  std::vector<std::uint32_t> arg2;
  std::vector<double> gap;  // F2
  std::vector<double> logits;
};

template <typename Real>
ConvNet<Real>::ConvNet(const CnnConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  params_.assign(cfg_.parameter_count(), Real(0));
  Rng rng(cfg_.seed);
  const auto he_uniform = [&](ParamBlock b, std::size_t fan_in) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (auto& w : block(b)) w = static_cast<Real>(rng.uniform(-limit, limit));
  };
  const std::size_t kk = cfg_.kernel * cfg_.kernel;
  he_uniform(ParamBlock::conv1_weight, cfg_.channels * kk);
  he_uniform(ParamBlock::conv2_weight, cfg_.conv1_filters * kk);
  he_uniform(ParamBlock::dense_weight, cfg_.conv2_filters);
}

template <typename Real>
std::span<Real> ConvNet<Real>::block(ParamBlock b) {
  const auto r = block_range(cfg_, b);
  return std::span<Real>(params_).subspan(r.offset, r.size);
}

template <typename Real>
std::span<const Real> ConvNet<Real>::block(ParamBlock b) const {
  const auto r = block_range(cfg_, b);
  return std::span<const Real>(params_).subspan(r.offset, r.size);
}

template <typename Real>
void ConvNet<Real>::run_forward(const FeatureTensor& t, Activations& act) const {
  if (t.rows() != cfg_.height || t.cols() != cfg_.width || t.channels() != cfg_.channels) {
    throw Error(ErrorCode::ShapeMismatch,
                "input " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + "x" +
                    std::to_string(t.channels()) + " does not match model " + std::to_string(cfg_.height) + "x" +
                    std::to_string(cfg_.width) + "x" + std::to_string(cfg_.channels));
  }
  const std::size_t H = cfg_.height, W = cfg_.width, C = cfg_.channels, P = cfg_.pool;
  const std::size_t H1 = H / P, W1 = W / P, H2 = H1 / P, W2 = W1 / P;
  const std::size_t F1 = cfg_.conv1_filters, F2 = cfg_.conv2_filters;

  act.input.resize(C * H * W);
  for (std::size_t y = 0; y < H; ++y) {
    for (std::size_t x = 0; x < W; ++x) {
      for (std::size_t c = 0; c < C; ++c) act.input[(c * H + y) * W + x] = static_cast<Real>(t.at(y, x, c));
    }
  }

  act.act1.resize(F1 * H * W);
  conv_relu_forward(act.input.data(), C, H, W, block(ParamBlock::conv1_weight).data(),
                    block(ParamBlock::conv1_bias).data(), F1, cfg_.kernel, act.act1.data());
  act.pool1.resize(F1 * H1 * W1);
  act.arg1.resize(act.pool1.size());
  maxpool_forward(act.act1.data(), F1, H, W, P, act.pool1.data(), act.arg1.data());

  act.act2.resize(F2 * H1 * W1);
  conv_relu_forward(act.pool1.data(), F1, H1, W1, block(ParamBlock::conv2_weight).data(),
                    block(ParamBlock::conv2_bias).data(), F2, cfg_.kernel, act.act2.data());
  act.pool2.resize(F2 * H2 * W2);
  act.arg2.resize(act.pool2.size());
  maxpool_forward(act.act2.data(), F2, H1, W1, P, act.pool2.data(), act.arg2.data());

  act.gap.assign(F2, 0.0);
  const std::size_t cells = H2 * W2;
  for (std::size_t c = 0; c < F2; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < cells; ++i) acc += static_cast<double>(act.pool2[c * cells + i]);
    act.gap[c] = acc / static_cast<double>(cells);
  }

  const auto dw = block(ParamBlock::dense_weight);
  const auto db = block(ParamBlock::dense_bias);
  act.logits.assign(cfg_.num_classes, 0.0);
  for (std::size_t j = 0; j < cfg_.num_classes; ++j) {
    double acc = static_cast<double>(db[j]);
    for (std::size_t i = 0; i < F2; ++i) acc += static_cast<double>(dw[j * F2 + i]) * act.gap[i];
    act.logits[j] = acc;
  }
}

template <typename Real>
std::vector<double> ConvNet<Real>::logits(const FeatureTensor& input) const {
  thread_local Activations act;
  run_forward(input, act);
  return act.logits;
}

template <typename Real>
std::vector<double> ConvNet<Real>::forward(const FeatureTensor& input) const {
  return softmax(logits(input));
}

template <typename Real>
std::vector<std::uint32_t> ConvNet<Real>::activation_pattern(const FeatureTensor& input) const {
  thread_local Activations act;
  run_forward(input, act);
  std::vector<std::uint32_t> pattern;
  pattern.reserve(2 * (act.arg1.size() + act.arg2.size()));
  const std::size_t plane1 = cfg_.height * cfg_.width;
  const std::size_t plane2 = plane1 / (cfg_.pool * cfg_.pool);
  const std::size_t cells1 = act.arg1.size() / cfg_.conv1_filters;
  const std::size_t cells2 = act.arg2.size() / cfg_.conv2_filters;
  for (std::size_t i = 0; i < act.arg1.size(); ++i) {
    pattern.push_back(act.arg1[i]);
    pattern.push_back(act.act1[(i / cells1) * plane1 + act.arg1[i]] > Real(0));
  }
  for (std::size_t i = 0; i < act.arg2.size(); ++i) {
    pattern.push_back(act.arg2[i]);
    pattern.push_back(act.act2[(i / cells2) * plane2 + act.arg2[i]] > Real(0));
  }
  return pattern;
}

template <typename Real>
double ConvNet<Real>::backward(const FeatureTensor& input, int target, std::span<Real> grad) const {
  if (target < 0 || static_cast<std::size_t>(target) >= cfg_.num_classes) {
    throw Error(ErrorCode::InvalidLabel, "target " + std::to_string(target) + " outside [0, " +
                                             std::to_string(cfg_.num_classes) + ")");
  }
  if (grad.size() != params_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "gradient buffer size does not match parameter count");
  }
  thread_local Activations act;
  run_forward(input, act);
  std::fill(grad.begin(), grad.end(), Real(0));

  const std::size_t H = cfg_.height, W = cfg_.width, C = cfg_.channels, P = cfg_.pool;
  const std::size_t H1 = H / P, W1 = W / P, H2 = H1 / P, W2 = W1 / P;
  const std::size_t F1 = cfg_.conv1_filters, F2 = cfg_.conv2_filters;
  const auto slice = [&](ParamBlock b) {
    const auto r = block_range(cfg_, b);
    return grad.subspan(r.offset, r.size);
  };

  const auto probs = softmax(act.logits);
  const double loss = -std::log(std::max(probs[static_cast<std::size_t>(target)], 1e-300));
  std::vector<double> dlogits = probs;
  dlogits[static_cast<std::size_t>(target)] -= 1.0;

  // Dense head.
  const auto dense_w = block(ParamBlock::dense_weight);
  auto g_dense_w = slice(ParamBlock::dense_weight);
  auto g_dense_b = slice(ParamBlock::dense_bias);
  std::vector<double> dgap(F2, 0.0);
  for (std::size_t j = 0; j < cfg_.num_classes; ++j) {
    g_dense_b[j] = static_cast<Real>(dlogits[j]);
    for (std::size_t i = 0; i < F2; ++i) {
      g_dense_w[j * F2 + i] = static_cast<Real>(dlogits[j] * act.gap[i]);
      dgap[i] += static_cast<double>(dense_w[j * F2 + i]) * dlogits[j];
    }
  }

  // Global average pool -> pool2 -> ReLU2 -> conv2.
  const std::size_t cells = H2 * W2;
  std::vector<Real> dpool2(F2 * cells);
  for (std::size_t c = 0; c < F2; ++c) {
    const auto g = static_cast<Real>(dgap[c] / static_cast<double>(cells));
    std::fill_n(dpool2.begin() + static_cast<std::ptrdiff_t>(c * cells), cells, g);
  }
  std::vector<Real> dpool1(F1 * H1 * W1, Real(0));
  pool_relu_conv_backward(dpool2.data(), act.arg2.data(), act.act2.data(), F2, H1, W1, P, act.pool1.data(), F1,
                          block(ParamBlock::conv2_weight).data(), cfg_.kernel, slice(ParamBlock::conv2_weight).data(),
                          slice(ParamBlock::conv2_bias).data(), dpool1.data());

  // pool1 -> ReLU1 -> conv1; the input gradient is not needed.
  pool_relu_conv_backward(dpool1.data(), act.arg1.data(), act.act1.data(), F1, H, W, P, act.input.data(), C,
                          block(ParamBlock::conv1_weight).data(), cfg_.kernel, slice(ParamBlock::conv1_weight).data(),
                          slice(ParamBlock::conv1_bias).data(), static_cast<Real*>(nullptr));
  return loss;
}

template class ConvNet<float>;
template class ConvNet<double>;

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double peak = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (auto& v : out) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (auto& v : out) v /= sum;
  return out;
}

int argmax(std::span<const double> scores) {
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

namespace {
constexpr char kModelMagic[4] = {'F', 'C', 'M', '1'};
constexpr std::size_t kConfigBlockBytes = 8 * 4 + 8;
}  // namespace

void save_model(const std::filesystem::path& path, const CnnModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  const auto& c = model.config();
  out.write(kModelMagic, 4);
  for (std::size_t v : {c.height, c.width, c.channels, c.conv1_filters, c.conv2_filters, c.kernel, c.pool,
                        c.num_classes}) {
    detail::put_u32(out, static_cast<std::uint32_t>(v));
  }
  detail::put_u64(out, c.seed);
  for (float p : model.parameters()) detail::put_f32(out, p);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

CnnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open checkpoint " + path.string());
  unsigned char head[4 + kConfigBlockBytes];
  if (!detail::read_exact(in, head, 4) || !std::equal(head, head + 4, kModelMagic)) {
    throw Error(ErrorCode::BadMagic, path.string() + " is not an FCM1 checkpoint");
  }
  if (!detail::read_exact(in, head + 4, kConfigBlockBytes)) {
    throw Error(ErrorCode::ShapeMismatch, path.string() + ": truncated config block");
  }
  CnnConfig cfg;
  std::size_t* fields[] = {&cfg.height, &cfg.width, &cfg.channels, &cfg.conv1_filters, &cfg.conv2_filters,
                           &cfg.kernel, &cfg.pool, &cfg.num_classes};
  for (std::size_t i = 0; i < 8; ++i) *fields[i] = detail::get_u32(head + 4 + 4 * i);
  cfg.seed = detail::get_u64(head + 4 + 32);
  CnnModel model(cfg);
  auto params = model.parameters();
  std::vector<unsigned char> payload(params.size() * 4);
  if (!detail::read_exact(in, payload.data(), payload.size()) || in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::ShapeMismatch, path.string() + ": parameter payload does not match config (" +
                                              std::to_string(params.size()) + " floats expected)");
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i] = detail::get_f32(payload.data() + 4 * i);
  return model;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "learning_rate must be > 0");
  if (batch_size == 0) throw Error(ErrorCode::InvalidConfig, "batch_size must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "Adam betas must lie in [0, 1)");
  }
}

TrainResult train(const CnnModel& initial, std::span<const Example> data, const TrainConfig& cfg,
                  const EpochCallback& on_epoch, const StopCondition& stop) {
  cfg.validate();
  if (data.empty()) throw Error(ErrorCode::EmptyDataset, "no training examples");
  const auto& mc = initial.config();
  for (const auto& ex : data) {
    if (ex.tensor == nullptr || ex.tensor->rows() != mc.height || ex.tensor->cols() != mc.width ||
        ex.tensor->channels() != mc.channels) {
      throw Error(ErrorCode::ShapeMismatch, "training tensor shape does not match the model input");
    }
    if (ex.label < 0 || static_cast<std::size_t>(ex.label) >= mc.num_classes) {
      throw Error(ErrorCode::InvalidLabel, "label " + std::to_string(ex.label) + " out of range");
    }
  }

  TrainResult result{initial, {}};
  auto params = result.model.parameters();
  const std::size_t P = params.size();
  std::vector<double> m(P, 0.0), v(P, 0.0), batch_grad(P);
  std::vector<float> sample_grad(P);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(cfg.seed);
  std::uint64_t step = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
      for (std::size_t i = start; i < end; ++i) {
        const auto& ex = data[order[i]];
        epoch_loss += result.model.backward(*ex.tensor, ex.label, sample_grad);
        for (std::size_t p = 0; p < P; ++p) batch_grad[p] += sample_grad[p];
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      ++step;
      const double correction1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double correction2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (std::size_t p = 0; p < P; ++p) {
        const double g = batch_grad[p] * scale;
        m[p] = cfg.beta1 * m[p] + (1.0 - cfg.beta1) * g;
        v[p] = cfg.beta2 * v[p] + (1.0 - cfg.beta2) * g * g;
        const double update = cfg.learning_rate * (m[p] / correction1) / (std::sqrt(v[p] / correction2) + cfg.epsilon);
        params[p] = static_cast<float>(static_cast<double>(params[p]) - update);
      }
    }
    result.loss_history.push_back(epoch_loss / static_cast<double>(data.size()));
    if (on_epoch) on_epoch(epoch, result.loss_history.back());
    if (stop && stop(epoch, result.model)) break;
  }
  return result;
}

std::size_t EvalReport::total() const {
  std::size_t n = 0;
  for (const auto& row : confusion) n += std::accumulate(row.begin(), row.end(), std::size_t{0});
  return n;
}

std::size_t EvalReport::correct() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < confusion.size(); ++i) n += confusion[i][i];
  return n;
}

double EvalReport::accuracy() const {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(n);
}

EvalReport report_from_predictions(std::size_t num_classes, std::span<const int> truth,
                                   std::span<const int> predicted, std::string condition) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::DimensionMismatch, "truth and prediction counts differ");
  }
  EvalReport report;
  report.condition = std::move(condition);
  report.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(truth[i]);
    const auto p = static_cast<std::size_t>(predicted[i]);
    if (truth[i] < 0 || predicted[i] < 0 || t >= num_classes || p >= num_classes) {
      throw Error(ErrorCode::InvalidLabel, "class index out of range");
    }
    ++report.confusion[t][p];
  }
  return report;
}

int predict(const CnnModel& model, const FeatureTensor& input) { return argmax(model.logits(input)); }

EvalReport evaluate(const CnnModel& model, std::span<const Example> data, std::string condition) {
  if (data.empty()) throw Error(ErrorCode::EmptyDataset, "no evaluation examples");
  std::vector<int> truth, predicted;
  for (const auto& ex : data) {
    truth.push_back(ex.label);
    predicted.push_back(predict(model, *ex.tensor));
  }
  return report_from_predictions(model.config().num_classes, truth, predicted, std::move(condition));
}

GradientCheckResult gradient_check(const ConvNet<double>& net, const FeatureTensor& input, int target,
                                   std::size_t samples, double step, std::uint64_t seed, KinkPolicy policy) {
  std::vector<double> analytic(net.parameters().size());
  net.backward(input, target, analytic);
  const auto loss_at = [&](const ConvNet<double>& candidate) {
    const auto p = candidate.forward(input);
    return -std::log(p[static_cast<std::size_t>(target)]);
  };
  const auto base_pattern = net.activation_pattern(input);

  std::vector<std::size_t> coords(analytic.size());
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(coords));

  GradientCheckResult result;
  ConvNet<double> probe = net;
  for (std::size_t idx : coords) {
    if (result.coordinates == samples) break;
    const double original = probe.parameters()[idx];
    probe.parameters()[idx] = original + step;
    const double up = loss_at(probe);
    const bool smooth_up = probe.activation_pattern(input) == base_pattern;
    probe.parameters()[idx] = original - step;
    const double down = loss_at(probe);
    const bool smooth_down = probe.activation_pattern(input) == base_pattern;
    probe.parameters()[idx] = original;
    if (!(smooth_up && smooth_down)) {
      ++result.kinks;
      if (policy == KinkPolicy::redraw) continue;
    }
    const double numeric = (up - down) / (2.0 * step);
    const double a = analytic[idx];
    const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
    ++result.coordinates;
    if (rel >= result.max_relative_error) {
      result.max_relative_error = rel;
      result.worst_index = idx;
      result.worst_analytic = a;
      result.worst_numeric = numeric;
    }
  }
  return result;
}

}  // namespace fcwr
