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

#ifndef MVGL_TOY_CODEC_H_
#define MVGL_TOY_CODEC_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mvgl/codec.h"

namespace mvgl {

// Deterministic stand-in for a real transform codec: 8x8 orthonormal DCT-II
// per channel, uniform quantization with step = quality, zigzag scan and
// run-length tokens.
//
// Payload: "TOYC", u32 width, u32 height, f32 step (all LE), then for every
// channel (3) and every 8x8 block in raster order, a token list: for each
// nonzero coefficient in zigzag order one byte holding the count of zeros
// skipped since the previous one, followed by the zigzag-signed LEB128
// quantized value; 0xFF ends the block. Partial edge blocks replicate the
// last row/column.
//
// A larger step never produces a larger payload for the same image.
class ToyCodec : public Codec {
 public:
  static constexpr size_t kBlock = 8;

  std::vector<uint8_t> Encode(const ImageTensor& img,
                              double quality) const override;
  ImageTensor Decode(std::span<const uint8_t> payload) const override;
};

// Orthonormal 1-D DCT-II basis: basis[u][x].
const std::array<std::array<double, 8>, 8>& DctBasis();

// Zigzag scan order for an 8x8 block (index into row-major positions).
const std::array<uint8_t, 64>& ZigzagOrder();

}  // namespace mvgl

#endif  // MVGL_TOY_CODEC_H_
