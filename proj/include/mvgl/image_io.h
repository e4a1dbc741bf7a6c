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

#ifndef MVGL_IMAGE_IO_H_
#define MVGL_IMAGE_IO_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvgl/image.h"

namespace mvgl {

// Binary PPM (P6, maxval <= 255). Reading also accepts P5 (expanded to
// three identical channels). Values are kept on the 0..255 scale.
ImageTensor DecodePpm(std::span<const uint8_t> bytes);
// Samples are clamped and rounded to 8 bits.
std::vector<uint8_t> EncodePpm(const ImageTensor& img);

ImageTensor ReadPpm(const std::string& path);
void WritePpm(const std::string& path, const ImageTensor& img);

}  // namespace mvgl

#endif  // MVGL_IMAGE_IO_H_
