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

#include "mvgl/image_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "mvgl/byte_io.h"
#include "mvgl/errors.h"

namespace mvgl {
namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  size_t Number() {
    SkipSpaceAndComments();
    size_t v = 0;
    size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + size_t(bytes_[pos_++] - '0');
      if (++digits > 9) throw Error(ErrorCode::kFormat, "ppm: number too large");
    }
    if (digits == 0) throw Error(ErrorCode::kFormat, "ppm: malformed header");
    return v;
  }
  // Exactly one whitespace byte separates the header from the raster.
  size_t RasterStart() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kFormat, "ppm: malformed header");
    }
    return pos_ + 1;
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  std::span<const uint8_t> bytes_;
  size_t pos_ = 2;
};

}  // namespace

ImageTensor DecodePpm(std::span<const uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
    throw Error(ErrorCode::kFormat, "not a binary PPM/PGM file");
  }
  const bool gray = bytes[1] == '5';
  HeaderScanner scan(bytes);
  const size_t width = scan.Number();
  const size_t height = scan.Number();
  const size_t maxval = scan.Number();
  if (width == 0 || height == 0) throw Error(ErrorCode::kFormat, "ppm: zero size");
  if (maxval == 0 || maxval > 255) {
    throw Error(ErrorCode::kFormat, "ppm: only 8-bit maxval is supported");
  }
  const size_t start = scan.RasterStart();
  const size_t samples = width * height * (gray ? 1 : 3);
  if (bytes.size() - start < samples) {
    throw Error(ErrorCode::kTruncated, "ppm: raster truncated");
  }
  ImageTensor img(3, height, width);
  const double scale = 255.0 / double(maxval);
  const uint8_t* p = bytes.data() + start;
  for (size_t y = 0; y < height; ++y) {
    for (size_t x = 0; x < width; ++x) {
      for (size_t c = 0; c < 3; ++c) {
        const uint8_t v = gray ? p[0] : p[c];
        img.at(c, y, x) =
            maxval == 255 ? float(v) : float(std::round(double(v) * scale));
      }
      p += gray ? 1 : 3;
    }
  }
  return img;
}

std::vector<uint8_t> EncodePpm(const ImageTensor& img) {
  if (img.channels() != 3) {
    throw Error(ErrorCode::kShape, "ppm: expected a 3-channel image");
  }
  const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + img.size());
  for (size_t y = 0; y < img.height(); ++y) {
    for (size_t x = 0; x < img.width(); ++x) {
      for (size_t c = 0; c < 3; ++c) {
        out.push_back(uint8_t(std::round(std::clamp(img.at(c, y, x), 0.0f, 255.0f))));
      }
    }
  }
  return out;
}

ImageTensor ReadPpm(const std::string& path) {
  try {
    return DecodePpm(ReadFileBytes(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path + ": " + e.what());
  }
}

void WritePpm(const std::string& path, const ImageTensor& img) {
  WriteFileBytes(path, EncodePpm(img));
}

}  // namespace mvgl
