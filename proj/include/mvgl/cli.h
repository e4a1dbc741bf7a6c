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

#ifndef MVGL_CLI_H_
#define MVGL_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mvgl/tiled_inference.h"

namespace mvgl {

// Process exit status of the `mvgl` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitInfeasible = 4,
  kExitCodec = 5,
  kExitConfig = 6,
};

// Entry point for `mvgl train|encode|decode|allocate|evaluate ...`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// "RxC", e.g. "2x2". Throws Error(kInvalidArgument).
Grid ParseGrid(const std::string& text);

// Accepts A/B/C, "none", or a decimal/0x-prefixed byte.
uint8_t ParseNetworkId(const std::string& text);

// Weights file for `id` inside a weights directory: "<hex id>.weights".
std::string WeightsFileName(uint8_t id);

// *.ppm files in `dir`, sorted by name; a non-directory path is returned as
// a single entry.
std::vector<std::string> ListImages(const std::string& path);

}  // namespace mvgl

#endif  // MVGL_CLI_H_
