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

#ifndef MVGL_CONTAINER_H_
#define MVGL_CONTAINER_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mvgl/codec.h"
#include "mvgl/image.h"
#include "mvgl/network.h"
#include "mvgl/tiled_inference.h"

namespace mvgl {

// A .mvgl stream is one selector byte followed by the untouched base-codec
// payload.
struct ContainerHeader {
  uint8_t network_id = 0xFF;
};

struct Unwrapped {
  ContainerHeader header;
  std::vector<uint8_t> payload;
};

// Throws UnsupportedNetworkError for ids outside {0x00, 0x01, 0x02, 0xFF}.
std::vector<uint8_t> Wrap(uint8_t network_id, std::span<const uint8_t> payload);

// Throws Error(kTruncated) for an empty stream and UnsupportedNetworkError
// for an unknown selector byte.
Unwrapped Unwrap(std::span<const uint8_t> stream);

std::vector<uint8_t> EncodeImage(const ImageTensor& img, double quality,
                                 uint8_t network_id, const Codec& codec);

using ModelSet = std::map<uint8_t, ModelWeights>;

struct DecodeOptions {
  Grid grid;
  bool parallel = false;
};

// Base-decodes the payload, post-processes with models[id] via tiled
// inference, then clamps and rounds to 8-bit. For 0xFF the base decoder's
// output is returned untouched.
// Throws Error(kMissingModel) if the id has no model.
ImageTensor DecodeImage(std::span<const uint8_t> stream, const ModelSet& models,
                        const Codec& codec, const DecodeOptions& options = {});

}  // namespace mvgl

#endif  // MVGL_CONTAINER_H_
