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

#ifndef MVGL_WEIGHTS_IO_H_
#define MVGL_WEIGHTS_IO_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvgl/network.h"

namespace mvgl {

inline constexpr uint8_t kWeightsFormatVersion = 1;
// magic(4) + version(1) + id(1) + B,n,k (3 x u16) + 2 scales + 3 means.
inline constexpr size_t kWeightsHeaderSize = 4 + 1 + 1 + 6 + 8 + 12;

struct StoredModel {
  uint8_t network_id = 0;
  ModelWeights weights;
};

// Layout (little-endian): "MVGL", u8 version, u8 network id, u16 B, u16 n,
// u16 k, f32 block_scale, f32 global_scale, 3 x f32 channel means, then every
// convolution in ForEachConv order as f32 weights [out][in][ky][kx] followed
// by f32 biases.
std::vector<uint8_t> SerializeWeights(const ModelWeights& m, uint8_t network_id);
StoredModel DeserializeWeights(std::span<const uint8_t> bytes);

void SaveWeights(const std::string& path, const ModelWeights& m,
                 uint8_t network_id);
StoredModel LoadWeights(const std::string& path);

// Adam moments in the same parameter order as the weights file:
// all m as f32, then all v as f32, then t as u64.
std::vector<uint8_t> SerializeOptimizerSidecar(std::span<const float> m,
                                               std::span<const float> v,
                                               uint64_t t);
void DeserializeOptimizerSidecar(std::span<const uint8_t> bytes,
                                 size_t parameter_count, std::vector<float>* m,
                                 std::vector<float>* v, uint64_t* t);

}  // namespace mvgl

#endif  // MVGL_WEIGHTS_IO_H_
