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

#ifndef MVGL_IMAGE_H_
#define MVGL_IMAGE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace mvgl {

// Planar image: channels x height x width, channel-major then row-major.
template <typename T>
class PlanarImage {
 public:
  PlanarImage() = default;
  // Throws Error(kShape) if height or width is zero.
  PlanarImage(size_t channels, size_t height, size_t width, T fill = T(0));

  size_t channels() const { return channels_; }
  size_t height() const { return height_; }
  size_t width() const { return width_; }
  size_t plane_size() const { return height_ * width_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(size_t c, size_t y, size_t x) {
    return data_[(c * height_ + y) * width_ + x];
  }
  const T& at(size_t c, size_t y, size_t x) const {
    return data_[(c * height_ + y) * width_ + x];
  }

  T* Row(size_t c, size_t y) { return data_.data() + (c * height_ + y) * width_; }
  const T* Row(size_t c, size_t y) const {
    return data_.data() + (c * height_ + y) * width_;
  }
  std::span<T> Plane(size_t c) {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<const T> Plane(size_t c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool SameShape(const PlanarImage& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }
  bool operator==(const PlanarImage& other) const = default;

 private:
  size_t channels_ = 0;
  size_t height_ = 0;
  size_t width_ = 0;
  std::vector<T> data_;
};

using ImageTensor = PlanarImage<float>;
using ImageTensorD = PlanarImage<double>;

// Region of an image, half-open in both axes.
struct Rect {
  size_t y0 = 0;
  size_t x0 = 0;
  size_t height = 0;
  size_t width = 0;

  size_t y1() const { return y0 + height; }
  size_t x1() const { return x0 + width; }
  size_t area() const { return height * width; }
  bool operator==(const Rect&) const = default;
};

template <typename T>
PlanarImage<T> Crop(const PlanarImage<T>& img, const Rect& r);

// Copies `src` into `dst` with its top-left at (y, x).
template <typename T>
void Paste(const PlanarImage<T>& src, size_t y, size_t x, PlanarImage<T>* dst);

template <typename To, typename From>
PlanarImage<To> ConvertImage(const PlanarImage<From>& img) {
  PlanarImage<To> out(img.channels(), img.height(), img.width());
  auto src = img.data();
  auto dst = out.data();
  for (size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<To>(src[i]);
  return out;
}

// Clamps to [0, 255] and rounds half away from zero.
ImageTensor QuantizeTo8Bit(const ImageTensor& img);

// Pads to at least (min_height, min_width) by mirror reflection about the
// edge samples (no edge repetition).
ImageTensor ReflectPad(const ImageTensor& img, size_t min_height,
                       size_t min_width);

}  // namespace mvgl

#endif  // MVGL_IMAGE_H_
