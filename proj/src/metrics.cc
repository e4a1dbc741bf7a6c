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

#include "mvgl/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvgl/errors.h"

namespace mvgl {

double SumSquaredError(const ImageTensor& a, const ImageTensor& b) {
  if (!a.SameShape(b)) throw Error(ErrorCode::kShape, "metric: shape mismatch");
  auto x = a.data();
  auto y = b.data();
  double sum = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = double(x[i]) - double(y[i]);
    sum += d * d;
  }
  return sum;
}

double MeanSquaredError(const ImageTensor& a, const ImageTensor& b) {
  return SumSquaredError(a, b) / double(a.size());
}

double Psnr(const ImageTensor& a, const ImageTensor& b) {
  const double mse = MeanSquaredError(a, b);
  if (mse == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

PlanarImage<double> Luma(const ImageTensor& img) {
  if (img.channels() == 1) return ConvertImage<double>(img);
  if (img.channels() != 3) {
    throw Error(ErrorCode::kShape, "luma: expected 1 or 3 channels");
  }
  PlanarImage<double> y(1, img.height(), img.width());
  auto r = img.Plane(0);
  auto g = img.Plane(1);
  auto b = img.Plane(2);
  auto out = y.Plane(0);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  }
  return y;
}

size_t MaxMsSsimScales(size_t height, size_t width) {
  size_t dim = std::min(height, width);
  size_t scales = 0;
  while (scales < kMsSsimWeights.size() && dim >= kSsimWindow) {
    ++scales;
    dim /= 2;
  }
  return scales;
}

namespace {

using Plane = PlanarImage<double>;

const std::array<double, kSsimWindow>& GaussianTaps() {
  static const auto taps = [] {
    std::array<double, kSsimWindow> t{};
    const double c = double(kSsimWindow / 2);
    double sum = 0;
    for (size_t i = 0; i < kSsimWindow; ++i) {
      const double d = double(i) - c;
      t[i] = std::exp(-d * d / (2 * kSsimSigma * kSsimSigma));
      sum += t[i];
    }
    for (double& v : t) v /= sum;
    return t;
  }();
  return taps;
}

// Separable Gaussian, valid region only.
Plane FilterValid(const Plane& in) {
  const auto& g = GaussianTaps();
  const size_t k = kSsimWindow;
  const size_t oh = in.height() - k + 1;
  const size_t ow = in.width() - k + 1;
  Plane horiz(1, in.height(), ow);
  for (size_t y = 0; y < in.height(); ++y) {
    const double* row = in.Row(0, y);
    double* dst = horiz.Row(0, y);
    for (size_t x = 0; x < ow; ++x) {
      double s = 0;
      for (size_t i = 0; i < k; ++i) s += g[i] * row[x + i];
      dst[x] = s;
    }
  }
  Plane out(1, oh, ow);
  for (size_t y = 0; y < oh; ++y) {
    double* dst = out.Row(0, y);
    for (size_t x = 0; x < ow; ++x) {
      double s = 0;
      for (size_t i = 0; i < k; ++i) s += g[i] * horiz.at(0, y + i, x);
      dst[x] = s;
    }
  }
  return out;
}

Plane Multiply(const Plane& a, const Plane& b) {
  Plane out(1, a.height(), a.width());
  auto x = a.data();
  auto y = b.data();
  auto o = out.data();
  for (size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  return out;
}

Plane Downsample2x(const Plane& in) {
  Plane out(1, in.height() / 2, in.width() / 2);
  for (size_t y = 0; y < out.height(); ++y) {
    for (size_t x = 0; x < out.width(); ++x) {
      out.at(0, y, x) = 0.25 * (in.at(0, 2 * y, 2 * x) + in.at(0, 2 * y, 2 * x + 1) +
                                in.at(0, 2 * y + 1, 2 * x) +
                                in.at(0, 2 * y + 1, 2 * x + 1));
    }
  }
  return out;
}

struct ScaleTerms {
  double cs;    // mean contrast-structure
  double ssim;  // mean luminance * contrast-structure
};

ScaleTerms SsimTerms(const Plane& x, const Plane& y) {
  constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
  constexpr double kC2 = (0.03 * 255) * (0.03 * 255);
  const Plane mu_x = FilterValid(x);
  const Plane mu_y = FilterValid(y);
  const Plane xx = FilterValid(Multiply(x, x));
  const Plane yy = FilterValid(Multiply(y, y));
  const Plane xy = FilterValid(Multiply(x, y));
  double cs_sum = 0;
  double ssim_sum = 0;
  const size_t n = mu_x.size();
  for (size_t i = 0; i < n; ++i) {
    const double mx = mu_x.data()[i];
    const double my = mu_y.data()[i];
    const double var_x = xx.data()[i] - mx * mx;
    const double var_y = yy.data()[i] - my * my;
    const double cov = xy.data()[i] - mx * my;
    const double cs = (2 * cov + kC2) / (var_x + var_y + kC2);
    const double l = (2 * mx * my + kC1) / (mx * mx + my * my + kC1);
    cs_sum += cs;
    ssim_sum += l * cs;
  }
  return {cs_sum / double(n), ssim_sum / double(n)};
}

}  // namespace

double MsSsim(const ImageTensor& a, const ImageTensor& b, size_t scales) {
  if (!a.SameShape(b)) throw Error(ErrorCode::kShape, "ms-ssim: shape mismatch");
  const size_t max_scales = MaxMsSsimScales(a.height(), a.width());
  if (scales == 0) scales = max_scales;
  if (scales == 0 || scales > max_scales) {
    throw Error(ErrorCode::kShape,
                "ms-ssim: image " + std::to_string(a.height()) + "x" +
                    std::to_string(a.width()) + " too small for " +
                    std::to_string(scales == 0 ? 1 : scales) + " scale(s)");
  }
  double weight_sum = 0;
  for (size_t s = 0; s < scales; ++s) weight_sum += kMsSsimWeights[s];

  Plane x = Luma(a);
  Plane y = Luma(b);
  double result = 1.0;
  for (size_t s = 0; s < scales; ++s) {
    const ScaleTerms t = SsimTerms(x, y);
    const double w = kMsSsimWeights[s] / weight_sum;
    const double term = s + 1 == scales ? t.ssim : t.cs;
    result *= std::pow(std::max(term, 0.0), w);
    if (s + 1 < scales) {
      x = Downsample2x(x);
      y = Downsample2x(y);
    }
  }
  return std::clamp(result, 0.0, 1.0);
}

double BitsPerPixel(uint64_t stream_bytes, size_t width, size_t height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bpp: empty image");
  }
  return 8.0 * double(stream_bytes) / (double(width) * double(height));
}

CorpusReport MakeCorpusReport(std::span<const EvaluationItem> items) {
  if (items.empty()) throw Error(ErrorCode::kInvalidArgument, "empty corpus");
  CorpusReport report;
  double psnr_sum = 0;
  double ssim_sum = 0;
  double bpp_sum = 0;
  double total_bits = 0;
  double total_pixels = 0;
  for (const EvaluationItem& item : items) {
    ImageReport r;
    r.name = item.name;
    r.stream_bytes = item.stream_bytes;
    r.pixels = item.original->plane_size();
    r.quality.psnr_db = Psnr(*item.original, *item.decoded);
    r.quality.ms_ssim = MsSsim(*item.original, *item.decoded);
    r.quality.bpp = BitsPerPixel(item.stream_bytes, item.original->width(),
                                 item.original->height());
    psnr_sum += r.quality.psnr_db;
    ssim_sum += r.quality.ms_ssim;
    bpp_sum += r.quality.bpp;
    total_bits += 8.0 * double(item.stream_bytes);
    total_pixels += double(r.pixels);
    report.images.push_back(std::move(r));
  }
  const double n = double(items.size());
  report.aggregate.psnr_db = psnr_sum / n;
  report.aggregate.ms_ssim = ssim_sum / n;
  report.aggregate.bpp = total_bits / total_pixels;
  report.mean_image_bpp = bpp_sum / n;
  return report;
}

}  // namespace mvgl
