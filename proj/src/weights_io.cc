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

#include "mvgl/weights_io.h"

#include <limits>

#include "mvgl/byte_io.h"
#include "mvgl/errors.h"

namespace mvgl {

std::vector<uint8_t> SerializeWeights(const ModelWeights& m,
                                      uint8_t network_id) {
  const NetworkConfig& c = m.config;
  constexpr size_t kU16Max = std::numeric_limits<uint16_t>::max();
  if (c.blocks > kU16Max || c.feature_maps > kU16Max || c.kernel > kU16Max) {
    throw Error(ErrorCode::kConfig, "config does not fit the weights format");
  }
  ByteWriter w;
  w.Tag("MVGL");
  w.U8(kWeightsFormatVersion);
  w.U8(network_id);
  w.U16(uint16_t(c.blocks));
  w.U16(uint16_t(c.feature_maps));
  w.U16(uint16_t(c.kernel));
  w.F32(c.block_scale);
  w.F32(c.global_scale);
  for (float mean : m.channel_means) w.F32(mean);
  m.ForEachConv([&](const ConvWeights& conv) {
    for (float v : conv.weights) w.F32(v);
    for (float v : conv.bias) w.F32(v);
  });
  return w.Take();
}

StoredModel DeserializeWeights(std::span<const uint8_t> bytes) {
  ByteReader r(bytes, "weights file");
  if (!r.ExpectTag("MVGL")) {
    throw Error(ErrorCode::kFormat, "weights file: bad magic");
  }
  const uint8_t version = r.U8();
  if (version != kWeightsFormatVersion) {
    throw Error(ErrorCode::kFormat, "weights file: unsupported version " +
                                        std::to_string(version));
  }
  StoredModel out;
  out.network_id = r.U8();
  NetworkConfig c;
  c.blocks = r.U16();
  c.feature_maps = r.U16();
  c.kernel = r.U16();
  c.block_scale = r.F32();
  c.global_scale = r.F32();
  try {
    ValidateConfig(c);
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormat, std::string("weights file: ") + e.what());
  }
  std::array<float, 3> means;
  for (float& mean : means) mean = r.F32();
  if (r.remaining() != 4 * ParameterCount(c)) {
    throw Error(r.remaining() < 4 * ParameterCount(c) ? ErrorCode::kTruncated
                                                      : ErrorCode::kFormat,
                "weights file: payload size does not match config");
  }
  out.weights = ModelWeights::Zeros(c);
  out.weights.channel_means = means;
  out.weights.ForEachConv([&](ConvWeights& conv) {
    for (float& v : conv.weights) v = r.F32();
    for (float& v : conv.bias) v = r.F32();
  });
  return out;
}

void SaveWeights(const std::string& path, const ModelWeights& m,
                 uint8_t network_id) {
  WriteFileBytes(path, SerializeWeights(m, network_id));
}

StoredModel LoadWeights(const std::string& path) {
  return DeserializeWeights(ReadFileBytes(path));
}

std::vector<uint8_t> SerializeOptimizerSidecar(std::span<const float> m,
                                               std::span<const float> v,
                                               uint64_t t) {
  if (m.size() != v.size()) {
    throw Error(ErrorCode::kShape, "optimizer sidecar: m/v length mismatch");
  }
  ByteWriter w;
  for (float x : m) w.F32(x);
  for (float x : v) w.F32(x);
  w.U64(t);
  return w.Take();
}

void DeserializeOptimizerSidecar(std::span<const uint8_t> bytes,
                                 size_t parameter_count, std::vector<float>* m,
                                 std::vector<float>* v, uint64_t* t) {
  if (bytes.size() != 8 * parameter_count + 8) {
    throw Error(ErrorCode::kFormat,
                "optimizer sidecar: size does not match parameter count");
  }
  ByteReader r(bytes, "optimizer sidecar");
  m->resize(parameter_count);
  v->resize(parameter_count);
  for (float& x : *m) x = r.F32();
  for (float& x : *v) x = r.F32();
  *t = r.U64();
}

}  // namespace mvgl
