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

#ifndef MVGL_ERRORS_H_
#define MVGL_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mvgl {

enum class ErrorCode {
  kShape,
  kInvalidArgument,
  kConfig,
  kTruncated,
  kUnsupportedNetwork,
  kFormat,
  kInfeasible,
  kIo,
  kCodec,
  kMissingModel,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported as Error (or a subclass carrying extra
// context). The CLI maps codes to process exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the rate allocator; carries the smallest achievable total size.
class InfeasibleError : public Error {
 public:
  InfeasibleError(uint64_t min_total_size, uint64_t limit);
  uint64_t min_total_size() const { return min_total_size_; }
  uint64_t limit() const { return limit_; }

 private:
  uint64_t min_total_size_;
  uint64_t limit_;
};

// Raised when a container names a network id outside the known set.
class UnsupportedNetworkError : public Error {
 public:
  explicit UnsupportedNetworkError(uint8_t id);
  uint8_t id() const { return id_; }

 private:
  uint8_t id_;
};

}  // namespace mvgl

#endif  // MVGL_ERRORS_H_
