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

#ifndef MVGL_CONV_H_
#define MVGL_CONV_H_

#include <cstddef>
#include <vector>

#include "mvgl/image.h"

namespace mvgl {

// Weights of one k x k convolution. Layout [out][in][ky][kx].
template <typename T>
struct ConvWeightsT {
  size_t out_channels = 0;
  size_t in_channels = 0;
  size_t kernel = 3;
  std::vector<T> weights;
  std::vector<T> bias;

  ConvWeightsT() = default;
  ConvWeightsT(size_t out, size_t in, size_t k)
      : out_channels(out),
        in_channels(in),
        kernel(k),
        weights(out * in * k * k, T(0)),
        bias(out, T(0)) {}

  size_t parameter_count() const { return weights.size() + bias.size(); }

  T& w(size_t o, size_t i, size_t ky, size_t kx) {
    return weights[((o * in_channels + i) * kernel + ky) * kernel + kx];
  }
  const T& w(size_t o, size_t i, size_t ky, size_t kx) const {
    return weights[((o * in_channels + i) * kernel + ky) * kernel + kx];
  }

  bool operator==(const ConvWeightsT&) const = default;
};

using ConvWeights = ConvWeightsT<float>;

// Same-size, stride-1 convolution with zero padding at the borders.
// Each output sample is accumulated as bias, then over (ky, kx, in-channel)
// in that order, independent of the sample's position, so any two inputs
// that agree on a pixel's window yield bit-identical outputs there.
template <typename T>
PlanarImage<T> Conv2D(const PlanarImage<T>& input, const ConvWeightsT<T>& w);

// Gradients of a convolution given the upstream gradient `grad_out`.
// Accumulates into `grad_w` (which must have w's shape). Writes the input
// gradient to `grad_in` when it is non-null.
template <typename T>
void Conv2DBackward(const PlanarImage<T>& input, const ConvWeightsT<T>& w,
                    const PlanarImage<T>& grad_out, ConvWeightsT<T>* grad_w,
                    PlanarImage<T>* grad_in);

}  // namespace mvgl

#endif  // MVGL_CONV_H_
