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

#ifndef MVGL_CODEC_H_
#define MVGL_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mvgl/image.h"

namespace mvgl {

// Base codec underneath the selector byte. `quality` is codec-specific: the
// quantizer step for ToyCodec, the QP for an external BPG binding.
// Failures are reported as Error(kCodec) with the codec's diagnostic.
class Codec {
 public:
  virtual ~Codec() = default;
  virtual std::vector<uint8_t> Encode(const ImageTensor& img,
                                      double quality) const = 0;
  virtual ImageTensor Decode(std::span<const uint8_t> payload) const = 0;
};

}  // namespace mvgl

#endif  // MVGL_CODEC_H_
