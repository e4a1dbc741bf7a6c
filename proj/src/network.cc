// Copyright 2026 The MVGL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mvgl/network.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mvgl/errors.h"

namespace mvgl {

bool IsKnownNetworkId(uint8_t id) {
  return id == 0x00 || id == 0x01 || id == 0x02 || id == 0xFF;
}

void ValidateConfig(const NetworkConfig& config) {
  if (config.blocks < 1) throw Error(ErrorCode::kConfig, "B must be >= 1");
  if (config.feature_maps < 1) throw Error(ErrorCode::kConfig, "n must be >= 1");
  if (config.kernel % 2 == 0) {
    throw Error(ErrorCode::kConfig, "kernel size must be odd");
  }
}

NetworkConfig PresetConfig(NetworkId id) {
  NetworkConfig c;
  switch (id) {
    case NetworkId::kMvglA:
      c.blocks = 32;
      c.feature_maps = 96;
      return c;
    case NetworkId::kMvglB:
      c.blocks = 8;
      c.feature_maps = 96;
      return c;
    case NetworkId::kMvglC:
      c.blocks = 32;
      c.feature_maps = 48;
      return c;
    case NetworkId::kPassthrough:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "no preset for passthrough id");
}

template <typename T>
ModelWeightsT<T> ModelWeightsT<T>::Zeros(const NetworkConfig& config) {
  ValidateConfig(config);
  const size_t n = config.feature_maps;
  const size_t k = config.kernel;
  ModelWeightsT<T> m;
  m.config = config;
  m.head = ConvWeightsT<T>(n, 3, k);
  m.blocks.resize(config.blocks);
  for (auto& b : m.blocks) {
    b.conv1 = ConvWeightsT<T>(n, n, k);
    b.conv2 = ConvWeightsT<T>(n, n, k);
  }
  m.tail = ConvWeightsT<T>(n, n, k);
  m.output = ConvWeightsT<T>(3, n, k);
  return m;
}

template <typename T>
size_t ModelWeightsT<T>::parameter_count() const {
  size_t total = 0;
  ForEachConv([&](const ConvWeightsT<T>& c) { total += c.parameter_count(); });
  return total;
}

template <typename T>
T SeluScalar(T x) {
  const T lambda = T(kSeluLambda);
  const T alpha = T(kSeluAlpha);
  return x > T(0) ? lambda * x : lambda * alpha * std::expm1(x);
}

template <typename T>
T SeluDerivative(T x) {
  const T lambda = T(kSeluLambda);
  const T alpha = T(kSeluAlpha);
  return x > T(0) ? lambda : lambda * alpha * std::exp(x);
}

template <typename T>
PlanarImage<T> Selu(const PlanarImage<T>& x) {
  PlanarImage<T> out = x;
  for (T& v : out.data()) v = SeluScalar(v);
  return out;
}

namespace {

// dst += scale * src, elementwise.
template <typename T>
void AddScaled(const PlanarImage<T>& src, T scale, PlanarImage<T>* dst) {
  auto s = src.data();
  auto d = dst->data();
  for (size_t i = 0; i < d.size(); ++i) d[i] += scale * s[i];
}

template <typename T>
void CheckBlockShape(const PlanarImage<T>& x,
                     const ResidualBlockWeightsT<T>& block) {
  if (x.channels() != block.conv1.in_channels ||
      block.conv1.out_channels != block.conv2.in_channels ||
      block.conv2.out_channels != x.channels()) {
    throw Error(ErrorCode::kShape, "residual block: shape mismatch");
  }
}

}  // namespace

template <typename T>
PlanarImage<T> ResidualBlockForward(const PlanarImage<T>& x,
                                    const ResidualBlockWeightsT<T>& block,
                                    T scale) {
  CheckBlockShape(x, block);
  PlanarImage<T> t = Conv2D(x, block.conv1);
  for (T& v : t.data()) v = SeluScalar(v);
  PlanarImage<T> branch = Conv2D(t, block.conv2);
  PlanarImage<T> out = x;
  AddScaled(branch, scale, &out);
  return out;
}

template <typename T>
PlanarImage<T> NetworkForward(const PlanarImage<T>& img,
                              const ModelWeightsT<T>& m) {
  if (img.channels() != 3) {
    throw Error(ErrorCode::kShape, "network expects a 3-channel image, got " +
                                       std::to_string(img.channels()));
  }
  PlanarImage<T> x = img;
  for (size_t c = 0; c < 3; ++c) {
    for (T& v : x.Plane(c)) v -= m.channel_means[c];
  }
  const PlanarImage<T> h = Conv2D(x, m.head);
  PlanarImage<T> cur = h;
  const T block_scale = T(m.config.block_scale);
  for (const auto& b : m.blocks) cur = ResidualBlockForward(cur, b, block_scale);
  PlanarImage<T> body = Conv2D(cur, m.tail);
  AddScaled(h, T(1), &body);
  const PlanarImage<T> y = Conv2D(body, m.output);
  PlanarImage<T> out = img;
  AddScaled(y, T(m.config.global_scale), &out);
  return out;
}

size_t ParameterCount(const NetworkConfig& c) {
  ValidateConfig(c);
  const size_t n = c.feature_maps;
  const size_t kk = c.kernel * c.kernel;
  const size_t head = 3 * n * kk + n;
  const size_t block = 2 * (n * n * kk + n);
  const size_t tail = n * n * kk + n;
  const size_t output = 3 * n * kk + 3;
  return head + c.blocks * block + tail + output;
}

size_t ConvLayerCount(const NetworkConfig& c) {
  ValidateConfig(c);
  return 2 * c.blocks + 3;
}

ModelWeights InitWeights(const NetworkConfig& config, uint64_t seed) {
  ModelWeights m = ModelWeights::Zeros(config);
  std::mt19937_64 rng(seed);
  m.ForEachConv([&](ConvWeights& c) {
    const double fan_in = double(c.in_channels * c.kernel * c.kernel);
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
    for (float& w : c.weights) w = static_cast<float>(dist(rng));
  });
  // Start from the identity map: the correction branch is off until trained.
  std::fill(m.output.weights.begin(), m.output.weights.end(), 0.0f);
  return m;
}

template struct ModelWeightsT<float>;
template struct ModelWeightsT<double>;
template float SeluScalar(float);
template double SeluScalar(double);
template float SeluDerivative(float);
template double SeluDerivative(double);
template PlanarImage<float> Selu(const PlanarImage<float>&);
template PlanarImage<double> Selu(const PlanarImage<double>&);
template PlanarImage<float> ResidualBlockForward(
    const PlanarImage<float>&, const ResidualBlockWeightsT<float>&, float);
template PlanarImage<double> ResidualBlockForward(
    const PlanarImage<double>&, const ResidualBlockWeightsT<double>&, double);
template PlanarImage<float> NetworkForward(const PlanarImage<float>&,
                                           const ModelWeightsT<float>&);
template PlanarImage<double> NetworkForward(const PlanarImage<double>&,
                                            const ModelWeightsT<double>&);

}  // namespace mvgl
