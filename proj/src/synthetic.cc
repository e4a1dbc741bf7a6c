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

#include "mvgl/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mvgl {

ImageTensor SyntheticTexturedImage(size_t height, size_t width, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = double(height);
  const double w = double(width);
  PlanarImage<double> img(3, height, width);

  // Background: per-channel plane plus a slow wave.
  for (size_t c = 0; c < 3; ++c) {
    const double base = 40 + 170 * unit(rng);
    const double gy = (unit(rng) - 0.5) * 120;
    const double gx = (unit(rng) - 0.5) * 120;
    const double amp = 20 * unit(rng);
    const double fy = 1 + 2 * unit(rng);
    const double fx = 1 + 2 * unit(rng);
    for (size_t y = 0; y < height; ++y) {
      for (size_t x = 0; x < width; ++x) {
        const double v = y / h;
        const double u = x / w;
        img.at(c, y, x) = base + gy * (v - 0.5) + gx * (u - 0.5) +
                          amp * std::sin(2 * std::numbers::pi * (fy * v + fx * u));
      }
    }
  }

  // Flat shapes with hard edges.
  const int shapes = 4 + int(unit(rng) * 4);
  for (int s = 0; s < shapes; ++s) {
    const bool disk = unit(rng) < 0.5;
    const double cy = unit(rng) * h;
    const double cx = unit(rng) * w;
    const double ry = (0.08 + 0.2 * unit(rng)) * h;
    const double rx = (0.08 + 0.2 * unit(rng)) * w;
    double color[3];
    for (double& col : color) col = 255 * unit(rng);
    for (size_t y = 0; y < height; ++y) {
      for (size_t x = 0; x < width; ++x) {
        const double dy = (y - cy) / ry;
        const double dx = (x - cx) / rx;
        const bool inside = disk ? dy * dy + dx * dx <= 1.0
                                 : std::abs(dy) <= 1.0 && std::abs(dx) <= 1.0;
        if (!inside) continue;
        for (size_t c = 0; c < 3; ++c) img.at(c, y, x) = color[c];
      }
    }
  }

  // Oriented gratings inside rectangular patches.
  const int gratings = 2 + int(unit(rng) * 2);
  for (int g = 0; g < gratings; ++g) {
    const size_t y0 = size_t(unit(rng) * h * 0.6);
    const size_t x0 = size_t(unit(rng) * w * 0.6);
    const size_t y1 = std::min(height, y0 + size_t((0.2 + 0.3 * unit(rng)) * h));
    const size_t x1 = std::min(width, x0 + size_t((0.2 + 0.3 * unit(rng)) * w));
    const double angle = unit(rng) * std::numbers::pi;
    const double period = 4 + 12 * unit(rng);
    const double amp = 30 + 50 * unit(rng);
    for (size_t y = y0; y < y1; ++y) {
      for (size_t x = x0; x < x1; ++x) {
        const double t = (std::cos(angle) * x + std::sin(angle) * y) / period;
        const double v = amp * std::sin(2 * std::numbers::pi * t);
        for (size_t c = 0; c < 3; ++c) img.at(c, y, x) += v;
      }
    }
  }

  std::normal_distribution<double> noise(0.0, 2.0);
  ImageTensor out(3, height, width);
  for (size_t i = 0; i < out.size(); ++i) {
    out.data()[i] =
        float(std::round(std::clamp(img.data()[i] + noise(rng), 0.0, 255.0)));
  }
  return out;
}

std::vector<ImageTensor> SyntheticCorpus(size_t count, size_t height,
                                         size_t width, uint64_t seed) {
  std::vector<ImageTensor> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    out.push_back(SyntheticTexturedImage(height, width, seed * 1000003 + i));
  }
  return out;
}

}  // namespace mvgl
