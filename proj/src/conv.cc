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

#include "mvgl/conv.h"

#include <algorithm>
#include <string>

#include "mvgl/errors.h"

namespace mvgl {
namespace {

// Rows/cols of the output for which input index (i + d) stays in [0, n).
struct Span1D {
  size_t begin;
  size_t end;
};

Span1D ValidRange(size_t n, long d) {
  const long lo = std::max<long>(0, -d);
  const long hi = std::min<long>(static_cast<long>(n), static_cast<long>(n) - d);
  if (hi <= lo) return {0, 0};
  return {static_cast<size_t>(lo), static_cast<size_t>(hi)};
}

template <typename T>
void CheckShapes(const PlanarImage<T>& input, const ConvWeightsT<T>& w) {
  if (input.channels() != w.in_channels) {
    throw Error(ErrorCode::kShape,
                "conv2d: input has " + std::to_string(input.channels()) +
                    " channels, weights expect " +
                    std::to_string(w.in_channels));
  }
  if (w.kernel % 2 == 0) {
    throw Error(ErrorCode::kShape, "conv2d: kernel size must be odd");
  }
  if (w.weights.size() !=
          w.out_channels * w.in_channels * w.kernel * w.kernel ||
      w.bias.size() != w.out_channels) {
    throw Error(ErrorCode::kShape, "conv2d: inconsistent weight arrays");
  }
}

}  // namespace

template <typename T>
PlanarImage<T> Conv2D(const PlanarImage<T>& input, const ConvWeightsT<T>& w) {
  CheckShapes(input, w);
  const size_t h = input.height();
  const size_t wd = input.width();
  const long r = static_cast<long>(w.kernel / 2);
  PlanarImage<T> out(w.out_channels, h, wd);
  for (size_t o = 0; o < w.out_channels; ++o) {
    auto plane = out.Plane(o);
    std::fill(plane.begin(), plane.end(), w.bias[o]);
    for (size_t ky = 0; ky < w.kernel; ++ky) {
      const long dy = static_cast<long>(ky) - r;
      const Span1D rows = ValidRange(h, dy);
      for (size_t kx = 0; kx < w.kernel; ++kx) {
        const long dx = static_cast<long>(kx) - r;
        const Span1D cols = ValidRange(wd, dx);
        for (size_t i = 0; i < w.in_channels; ++i) {
          const T k = w.w(o, i, ky, kx);
          for (size_t y = rows.begin; y < rows.end; ++y) {
            const T* in_row = input.Row(i, y + dy) + dx;
            T* out_row = out.Row(o, y);
            for (size_t x = cols.begin; x < cols.end; ++x) {
              out_row[x] += k * in_row[x];
            }
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
void Conv2DBackward(const PlanarImage<T>& input, const ConvWeightsT<T>& w,
                    const PlanarImage<T>& grad_out, ConvWeightsT<T>* grad_w,
                    PlanarImage<T>* grad_in) {
  CheckShapes(input, w);
  if (grad_out.channels() != w.out_channels ||
      grad_out.height() != input.height() ||
      grad_out.width() != input.width()) {
    throw Error(ErrorCode::kShape, "conv2d backward: gradient shape mismatch");
  }
  if (grad_w->weights.size() != w.weights.size() ||
      grad_w->bias.size() != w.bias.size()) {
    throw Error(ErrorCode::kShape, "conv2d backward: grad_w shape mismatch");
  }
  const size_t h = input.height();
  const size_t wd = input.width();
  const long r = static_cast<long>(w.kernel / 2);
  if (grad_in != nullptr) {
    *grad_in = PlanarImage<T>(input.channels(), h, wd);
  }
  for (size_t o = 0; o < w.out_channels; ++o) {
    T bias_sum = 0;
    for (T g : grad_out.Plane(o)) bias_sum += g;
    grad_w->bias[o] += bias_sum;
    for (size_t ky = 0; ky < w.kernel; ++ky) {
      const long dy = static_cast<long>(ky) - r;
      const Span1D rows = ValidRange(h, dy);
      for (size_t kx = 0; kx < w.kernel; ++kx) {
        const long dx = static_cast<long>(kx) - r;
        const Span1D cols = ValidRange(wd, dx);
        for (size_t i = 0; i < w.in_channels; ++i) {
          const T k = w.w(o, i, ky, kx);
          T acc = 0;
          for (size_t y = rows.begin; y < rows.end; ++y) {
            const T* in_row = input.Row(i, y + dy) + dx;
            const T* g_row = grad_out.Row(o, y);
            T row_acc = 0;
            for (size_t x = cols.begin; x < cols.end; ++x) {
              row_acc += g_row[x] * in_row[x];
            }
            acc += row_acc;
            if (grad_in != nullptr) {
              T* gi_row = grad_in->Row(i, y + dy) + dx;
              for (size_t x = cols.begin; x < cols.end; ++x) {
                gi_row[x] += k * g_row[x];
              }
            }
          }
          grad_w->w(o, i, ky, kx) += acc;
        }
      }
    }
  }
}

template PlanarImage<float> Conv2D(const PlanarImage<float>&,
                                   const ConvWeightsT<float>&);
template PlanarImage<double> Conv2D(const PlanarImage<double>&,
                                    const ConvWeightsT<double>&);
template void Conv2DBackward(const PlanarImage<float>&,
                             const ConvWeightsT<float>&,
                             const PlanarImage<float>&, ConvWeightsT<float>*,
                             PlanarImage<float>*);
template void Conv2DBackward(const PlanarImage<double>&,
                             const ConvWeightsT<double>&,
                             const PlanarImage<double>&, ConvWeightsT<double>*,
                             PlanarImage<double>*);

}  // namespace mvgl
