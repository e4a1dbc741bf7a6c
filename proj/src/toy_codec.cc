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

#include "mvgl/toy_codec.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mvgl/byte_io.h"
#include "mvgl/errors.h"

namespace mvgl {

const std::array<std::array<double, 8>, 8>& DctBasis() {
  static const auto basis = [] {
    std::array<std::array<double, 8>, 8> b{};
    for (size_t u = 0; u < 8; ++u) {
      const double scale = u == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8);
      for (size_t x = 0; x < 8; ++x) {
        b[u][x] = scale * std::cos((2.0 * x + 1.0) * u * std::numbers::pi / 16.0);
      }
    }
    return b;
  }();
  return basis;
}

const std::array<uint8_t, 64>& ZigzagOrder() {
  static const auto order = [] {
    std::array<uint8_t, 64> o{};
    size_t k = 0;
    for (int s = 0; s < 15; ++s) {
      for (int i = 0; i <= s; ++i) {
        const int y = (s % 2 == 0) ? s - i : i;
        const int x = s - y;
        if (y < 8 && x < 8) o[k++] = uint8_t(y * 8 + x);
      }
    }
    return o;
  }();
  return order;
}

namespace {

constexpr uint8_t kEndOfBlock = 0xFF;
constexpr size_t kChannels = 3;

void PutVarint(int64_t v, ByteWriter* w) {
  uint64_t z = v >= 0 ? uint64_t(v) << 1 : (uint64_t(-(v + 1)) << 1) | 1;
  while (z >= 0x80) {
    w->U8(uint8_t(z | 0x80));
    z >>= 7;
  }
  w->U8(uint8_t(z));
}

int64_t GetVarint(ByteReader* r) {
  uint64_t z = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const uint8_t b = r->U8();
    z |= uint64_t(b & 0x7F) << shift;
    if ((b & 0x80) == 0) {
      return (z & 1) ? -int64_t(z >> 1) - 1 : int64_t(z >> 1);
    }
  }
  throw Error(ErrorCode::kCodec, "toy codec: varint too long");
}

// Separable 2-D transform of a row-major 8x8 block; inverse when `inverse`.
void Transform(const double* in, double* out, bool inverse) {
  const auto& b = DctBasis();
  double tmp[64];
  for (size_t y = 0; y < 8; ++y) {
    for (size_t u = 0; u < 8; ++u) {
      double s = 0;
      for (size_t x = 0; x < 8; ++x) {
        s += (inverse ? b[x][u] : b[u][x]) * in[y * 8 + x];
      }
      tmp[y * 8 + u] = s;
    }
  }
  for (size_t u = 0; u < 8; ++u) {
    for (size_t v = 0; v < 8; ++v) {
      double s = 0;
      for (size_t y = 0; y < 8; ++y) {
        s += (inverse ? b[y][v] : b[v][y]) * tmp[y * 8 + u];
      }
      out[v * 8 + u] = s;
    }
  }
}

}  // namespace

std::vector<uint8_t> ToyCodec::Encode(const ImageTensor& img,
                                      double quality) const {
  if (img.channels() != kChannels) {
    throw Error(ErrorCode::kCodec, "toy codec: expected 3 channels, got " +
                                       std::to_string(img.channels()));
  }
  if (!(quality > 0) || !std::isfinite(quality)) {
    throw Error(ErrorCode::kCodec, "toy codec: step must be positive");
  }
  const float step_f = float(quality);
  const double step = step_f;
  ByteWriter w;
  w.Tag("TOYC");
  w.U32(uint32_t(img.width()));
  w.U32(uint32_t(img.height()));
  w.F32(step_f);
  const auto& zigzag = ZigzagOrder();
  const size_t h = img.height();
  const size_t wd = img.width();
  double block[64];
  double coef[64];
  for (size_t c = 0; c < kChannels; ++c) {
    for (size_t by = 0; by < h; by += kBlock) {
      for (size_t bx = 0; bx < wd; bx += kBlock) {
        for (size_t y = 0; y < kBlock; ++y) {
          const size_t sy = std::min(by + y, h - 1);
          for (size_t x = 0; x < kBlock; ++x) {
            const size_t sx = std::min(bx + x, wd - 1);
            block[y * 8 + x] = double(img.at(c, sy, sx)) - 128.0;
          }
        }
        Transform(block, coef, /*inverse=*/false);
        uint8_t run = 0;
        for (size_t k = 0; k < 64; ++k) {
          const int64_t q = std::llround(coef[zigzag[k]] / step);
          if (q == 0) {
            ++run;
            continue;
          }
          w.U8(run);
          PutVarint(q, &w);
          run = 0;
        }
        w.U8(kEndOfBlock);
      }
    }
  }
  return w.Take();
}

ImageTensor ToyCodec::Decode(std::span<const uint8_t> payload) const {
  try {
    ByteReader r(payload, "toy codec payload");
    if (!r.ExpectTag("TOYC")) {
      throw Error(ErrorCode::kCodec, "toy codec: bad magic");
    }
    const size_t wd = r.U32();
    const size_t h = r.U32();
    const double step = r.F32();
    if (wd == 0 || h == 0 || !(step > 0)) {
      throw Error(ErrorCode::kCodec, "toy codec: bad header");
    }
    ImageTensor out(kChannels, h, wd);
    const auto& zigzag = ZigzagOrder();
    double coef[64];
    double block[64];
    for (size_t c = 0; c < kChannels; ++c) {
      for (size_t by = 0; by < h; by += kBlock) {
        for (size_t bx = 0; bx < wd; bx += kBlock) {
          std::fill(coef, coef + 64, 0.0);
          size_t k = 0;
          while (true) {
            const uint8_t run = r.U8();
            if (run == kEndOfBlock) break;
            k += run;
            if (k >= 64) throw Error(ErrorCode::kCodec, "toy codec: run overflow");
            coef[zigzag[k]] = double(GetVarint(&r)) * step;
            ++k;
          }
          Transform(coef, block, /*inverse=*/true);
          for (size_t y = 0; y < kBlock && by + y < h; ++y) {
            for (size_t x = 0; x < kBlock && bx + x < wd; ++x) {
              const double v = std::clamp(block[y * 8 + x] + 128.0, 0.0, 255.0);
              out.at(c, by + y, bx + x) = float(std::round(v));
            }
          }
        }
      }
    }
    if (r.remaining() != 0) {
      throw Error(ErrorCode::kCodec, "toy codec: trailing bytes");
    }
    return out;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCodec) throw;
    throw Error(ErrorCode::kCodec, e.what());
  }
}

}  // namespace mvgl
