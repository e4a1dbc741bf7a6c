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

#include "mvgl/image.h"

#include <algorithm>
#include <cmath>

#include "mvgl/errors.h"

namespace mvgl {

template <typename T>
PlanarImage<T>::PlanarImage(size_t channels, size_t height, size_t width,
                            T fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels == 0 || height == 0 || width == 0) {
    throw Error(ErrorCode::kShape, "image dimensions must be positive");
  }
  data_.assign(channels * height * width, fill);
}

template <typename T>
PlanarImage<T> Crop(const PlanarImage<T>& img, const Rect& r) {
  if (r.y1() > img.height() || r.x1() > img.width()) {
    throw Error(ErrorCode::kShape, "crop rectangle outside image");
  }
  PlanarImage<T> out(img.channels(), r.height, r.width);
  for (size_t c = 0; c < img.channels(); ++c) {
    for (size_t y = 0; y < r.height; ++y) {
      const T* src = img.Row(c, r.y0 + y) + r.x0;
      std::copy(src, src + r.width, out.Row(c, y));
    }
  }
  return out;
}

template <typename T>
void Paste(const PlanarImage<T>& src, size_t y, size_t x, PlanarImage<T>* dst) {
  if (src.channels() != dst->channels() || y + src.height() > dst->height() ||
      x + src.width() > dst->width()) {
    throw Error(ErrorCode::kShape, "paste region outside destination");
  }
  for (size_t c = 0; c < src.channels(); ++c) {
    for (size_t row = 0; row < src.height(); ++row) {
      const T* s = src.Row(c, row);
      std::copy(s, s + src.width(), dst->Row(c, y + row) + x);
    }
  }
}

ImageTensor QuantizeTo8Bit(const ImageTensor& img) {
  ImageTensor out = img;
  for (float& v : out.data()) {
    v = std::round(std::clamp(v, 0.0f, 255.0f));
  }
  return out;
}

namespace {

size_t ReflectIndex(long i, long n) {
  if (n == 1) return 0;
  const long period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return static_cast<size_t>(i < n ? i : period - i);
}

}  // namespace

ImageTensor ReflectPad(const ImageTensor& img, size_t min_height,
                       size_t min_width) {
  const size_t h = std::max(img.height(), min_height);
  const size_t w = std::max(img.width(), min_width);
  if (h == img.height() && w == img.width()) return img;
  // Center the original so padding is split between both sides.
  const long oy = static_cast<long>((h - img.height()) / 2);
  const long ox = static_cast<long>((w - img.width()) / 2);
  ImageTensor out(img.channels(), h, w);
  for (size_t c = 0; c < img.channels(); ++c) {
    for (size_t y = 0; y < h; ++y) {
      const size_t sy = ReflectIndex(static_cast<long>(y) - oy,
                                     static_cast<long>(img.height()));
      for (size_t x = 0; x < w; ++x) {
        const size_t sx = ReflectIndex(static_cast<long>(x) - ox,
                                       static_cast<long>(img.width()));
        out.at(c, y, x) = img.at(c, sy, sx);
      }
    }
  }
  return out;
}

template class PlanarImage<float>;
template class PlanarImage<double>;
template PlanarImage<float> Crop(const PlanarImage<float>&, const Rect&);
template PlanarImage<double> Crop(const PlanarImage<double>&, const Rect&);
template void Paste(const PlanarImage<float>&, size_t, size_t,
                    PlanarImage<float>*);
template void Paste(const PlanarImage<double>&, size_t, size_t,
                    PlanarImage<double>*);

}  // namespace mvgl
