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

#ifndef MVGL_SYNTHETIC_H_
#define MVGL_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvgl/image.h"

namespace mvgl {

// Deterministic 8-bit RGB test image: smooth gradients, flat shapes with hard
// edges, oriented gratings and mild noise. Integer-valued samples in [0, 255].
ImageTensor SyntheticTexturedImage(size_t height, size_t width, uint64_t seed);

std::vector<ImageTensor> SyntheticCorpus(size_t count, size_t height,
                                         size_t width, uint64_t seed);

}  // namespace mvgl

#endif  // MVGL_SYNTHETIC_H_
