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

#include "mvgl/errors.h"

#include <cstdio>

namespace mvgl {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShape:
      return "shape";
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kTruncated:
      return "truncated";
    case ErrorCode::kUnsupportedNetwork:
      return "unsupported-network";
    case ErrorCode::kFormat:
      return "format";
    case ErrorCode::kInfeasible:
      return "infeasible";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kCodec:
      return "codec";
    case ErrorCode::kMissingModel:
      return "missing-model";
  }
  return "unknown";
}

InfeasibleError::InfeasibleError(uint64_t min_total_size, uint64_t limit)
    : Error(ErrorCode::kInfeasible,
            "infeasible budget: minimal achievable size " +
                std::to_string(min_total_size) + " exceeds limit " +
                std::to_string(limit)),
      min_total_size_(min_total_size),
      limit_(limit) {}

namespace {
std::string UnsupportedMessage(uint8_t id) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "unsupported network id 0x%02X", id);
  return buf;
}
}  // namespace

UnsupportedNetworkError::UnsupportedNetworkError(uint8_t id)
    : Error(ErrorCode::kUnsupportedNetwork, UnsupportedMessage(id)), id_(id) {}

}  // namespace mvgl
