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

#include "mvgl/container.h"

#include <cstdio>

#include "mvgl/errors.h"

namespace mvgl {

std::vector<uint8_t> Wrap(uint8_t network_id, std::span<const uint8_t> payload) {
  if (!IsKnownNetworkId(network_id)) throw UnsupportedNetworkError(network_id);
  std::vector<uint8_t> out;
  out.reserve(payload.size() + 1);
  out.push_back(network_id);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Unwrapped Unwrap(std::span<const uint8_t> stream) {
  if (stream.empty()) {
    throw Error(ErrorCode::kTruncated, "container: empty stream");
  }
  if (!IsKnownNetworkId(stream[0])) throw UnsupportedNetworkError(stream[0]);
  Unwrapped out;
  out.header.network_id = stream[0];
  out.payload.assign(stream.begin() + 1, stream.end());
  return out;
}

std::vector<uint8_t> EncodeImage(const ImageTensor& img, double quality,
                                 uint8_t network_id, const Codec& codec) {
  if (!IsKnownNetworkId(network_id)) throw UnsupportedNetworkError(network_id);
  return Wrap(network_id, codec.Encode(img, quality));
}

ImageTensor DecodeImage(std::span<const uint8_t> stream, const ModelSet& models,
                        const Codec& codec, const DecodeOptions& options) {
  const Unwrapped u = Unwrap(stream);
  const uint8_t id = u.header.network_id;
  const ModelWeights* model = nullptr;
  if (id != uint8_t(NetworkId::kPassthrough)) {
    auto it = models.find(id);
    if (it == models.end()) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "no weights loaded for network 0x%02X", id);
      throw Error(ErrorCode::kMissingModel, buf);
    }
    model = &it->second;
  }
  ImageTensor base = codec.Decode(u.payload);
  if (model == nullptr) return base;
  TiledOptions tiled;
  tiled.grid = options.grid;
  tiled.parallel = options.parallel;
  return QuantizeTo8Bit(TiledForward(base, *model, tiled));
}

}  // namespace mvgl
