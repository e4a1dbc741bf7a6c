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

#ifndef MVGL_METRICS_H_
#define MVGL_METRICS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvgl/image.h"

namespace mvgl {

// 10 log10(255^2 / MSE) over all samples; +inf for identical images.
double Psnr(const ImageTensor& a, const ImageTensor& b);

// Unlike the luma helpers below, MSE is taken over every channel.
double MeanSquaredError(const ImageTensor& a, const ImageTensor& b);
double SumSquaredError(const ImageTensor& a, const ImageTensor& b);

// BT.601 luma of a 3-channel image (a 1-channel image is returned as is).
PlanarImage<double> Luma(const ImageTensor& img);

inline constexpr std::array<double, 5> kMsSsimWeights = {0.0448, 0.2856, 0.3001,
                                                         0.2363, 0.1333};
inline constexpr size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;

// Largest scale count (<= 5) for which the coarsest scale still fits the
// 11x11 window.
size_t MaxMsSsimScales(size_t height, size_t width);

// Multi-scale SSIM on luma with an 11x11 Gaussian (sigma 1.5) window, valid
// filtering and 2x2 averaging between scales. scales = 0 selects
// MaxMsSsimScales; fewer than 5 scales renormalizes the leading weights.
// Negative contrast-structure terms are clamped to 0 so the result is in
// [0, 1]. Throws Error(kShape) if the images differ in shape or are too
// small for the requested scale count.
double MsSsim(const ImageTensor& a, const ImageTensor& b, size_t scales = 0);

double BitsPerPixel(uint64_t stream_bytes, size_t width, size_t height);

struct QualityReport {
  double psnr_db = 0;
  double ms_ssim = 0;
  double bpp = 0;
};

struct ImageReport {
  std::string name;
  QualityReport quality;
  uint64_t stream_bytes = 0;
  size_t pixels = 0;
};

struct CorpusReport {
  std::vector<ImageReport> images;
  // PSNR and MS-SSIM are per-image means; bpp is total bits/total pixels.
  QualityReport aggregate;
  // Per-image mean of bpp, reported alongside.
  double mean_image_bpp = 0;
};

struct EvaluationItem {
  std::string name;
  const ImageTensor* original = nullptr;
  const ImageTensor* decoded = nullptr;
  uint64_t stream_bytes = 0;
};

// Throws Error(kInvalidArgument) on an empty corpus.
CorpusReport MakeCorpusReport(std::span<const EvaluationItem> items);

}  // namespace mvgl

#endif  // MVGL_METRICS_H_
