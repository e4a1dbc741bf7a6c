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

#ifndef MVGL_NETWORK_H_
#define MVGL_NETWORK_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvgl/conv.h"
#include "mvgl/image.h"

namespace mvgl {

// Selector values for the three trained variants plus "no post-processing".
enum class NetworkId : uint8_t {
  kMvglA = 0x00,
  kMvglB = 0x01,
  kMvglC = 0x02,
  kPassthrough = 0xFF,
};

bool IsKnownNetworkId(uint8_t id);

struct NetworkConfig {
  size_t blocks = 8;         // B
  size_t feature_maps = 96;  // n
  size_t kernel = 3;         // k, odd
  float block_scale = 0.1f;
  float global_scale = 0.1f;

  bool operator==(const NetworkConfig&) const = default;
};

// Throws Error(kConfig) on B < 1, n < 1 or even k.
void ValidateConfig(const NetworkConfig& config);

// (B=32, n=96), (B=8, n=96), (B=32, n=48). Throws for kPassthrough.
NetworkConfig PresetConfig(NetworkId id);

template <typename T>
struct ResidualBlockWeightsT {
  ConvWeightsT<T> conv1;
  ConvWeightsT<T> conv2;
  bool operator==(const ResidualBlockWeightsT&) const = default;
};

template <typename T>
struct ModelWeightsT {
  NetworkConfig config;
  ConvWeightsT<T> head;  // 3 -> n
  std::vector<ResidualBlockWeightsT<T>> blocks;
  ConvWeightsT<T> tail;    // n -> n
  ConvWeightsT<T> output;  // n -> 3
  std::array<T, 3> channel_means{};

  // All-zero weights with shapes matching `config`.
  static ModelWeightsT Zeros(const NetworkConfig& config);

  // Visits each convolution in serialization order: head, block1.conv1,
  // block1.conv2, ..., tail, output.
  template <typename Fn>
  void ForEachConv(Fn&& fn) {
    fn(head);
    for (auto& b : blocks) {
      fn(b.conv1);
      fn(b.conv2);
    }
    fn(tail);
    fn(output);
  }
  template <typename Fn>
  void ForEachConv(Fn&& fn) const {
    fn(head);
    for (const auto& b : blocks) {
      fn(b.conv1);
      fn(b.conv2);
    }
    fn(tail);
    fn(output);
  }

  size_t parameter_count() const;

  bool operator==(const ModelWeightsT&) const = default;
};

using ModelWeights = ModelWeightsT<float>;
using ModelWeightsD = ModelWeightsT<double>;

template <typename To, typename From>
ModelWeightsT<To> ConvertWeights(const ModelWeightsT<From>& m) {
  auto conv = [](const ConvWeightsT<From>& c) {
    ConvWeightsT<To> out(c.out_channels, c.in_channels, c.kernel);
    for (size_t i = 0; i < c.weights.size(); ++i) out.weights[i] = To(c.weights[i]);
    for (size_t i = 0; i < c.bias.size(); ++i) out.bias[i] = To(c.bias[i]);
    return out;
  };
  ModelWeightsT<To> out;
  out.config = m.config;
  out.head = conv(m.head);
  for (const auto& b : m.blocks) out.blocks.push_back({conv(b.conv1), conv(b.conv2)});
  out.tail = conv(m.tail);
  out.output = conv(m.output);
  for (size_t c = 0; c < 3; ++c) out.channel_means[c] = To(m.channel_means[c]);
  return out;
}

// Scaled exponential linear unit.
inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

template <typename T>
T SeluScalar(T x);
template <typename T>
T SeluDerivative(T x);
template <typename T>
PlanarImage<T> Selu(const PlanarImage<T>& x);

// x + scale * conv2(selu(conv1(x))).
template <typename T>
PlanarImage<T> ResidualBlockForward(const PlanarImage<T>& x,
                                    const ResidualBlockWeightsT<T>& block,
                                    T scale);

// Full post-processing network on a 3-channel image:
//   x    = img - channel_means
//   h    = head(x)
//   body = tail(block_B(...block_1(h))) + h
//   out  = img + global_scale * output(body)
template <typename T>
PlanarImage<T> NetworkForward(const PlanarImage<T>& img,
                              const ModelWeightsT<T>& m);

// Exact scalar-parameter count of the assembled network.
size_t ParameterCount(const NetworkConfig& config);

// Number of convolution layers, 2B + 3.
size_t ConvLayerCount(const NetworkConfig& config);

// He (fan-in scaled Gaussian) weights, zero biases, zero channel means.
// The output convolution starts at zero, so a fresh model is the identity.
// Deterministic for a given seed.
ModelWeights InitWeights(const NetworkConfig& config, uint64_t seed);

}  // namespace mvgl

#endif  // MVGL_NETWORK_H_
