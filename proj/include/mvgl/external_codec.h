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

#ifndef MVGL_EXTERNAL_CODEC_H_
#define MVGL_EXTERNAL_CODEC_H_

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "mvgl/codec.h"

namespace mvgl {

// Minimal TOML-style "key = value" reader: one assignment per line, values
// optionally double-quoted, '#' comments, [section] headers ignored.
std::map<std::string, std::string> ParseKeyValueConfig(std::string_view text);

struct ExternalCodecConfig {
  // Command templates run through the shell. Placeholders: {input},
  // {output}, {quality}. Images are exchanged as binary PPM files.
  std::string encoder;
  std::string decoder;
  // How {quality} is rendered: "int" (rounded, e.g. a QP) or "float".
  std::string quality_format = "int";
};

// Required keys: encoder, decoder. Optional: quality_format.
ExternalCodecConfig ParseExternalCodecConfig(std::string_view text);

// Binds an external encoder/decoder pair, e.g. bpgenc/bpgdec:
//   encoder = "bpgenc -m 9 -q {quality} -o {output} {input}"
//   decoder = "bpgdec -o {output} {input}"
// Each call works in its own temporary directory, so calls may run
// concurrently.
class ExternalCodec : public Codec {
 public:
  explicit ExternalCodec(ExternalCodecConfig config);

  std::vector<uint8_t> Encode(const ImageTensor& img,
                              double quality) const override;
  ImageTensor Decode(std::span<const uint8_t> payload) const override;

  // Substitutes placeholders in `tmpl`.
  static std::string Expand(const std::string& tmpl, const std::string& input,
                            const std::string& output,
                            const std::string& quality);

 private:
  ExternalCodecConfig config_;
};

// "toy" (or empty path) yields ToyCodec; otherwise reads a config file.
std::unique_ptr<Codec> MakeCodec(const std::string& config_path);

}  // namespace mvgl

#endif  // MVGL_EXTERNAL_CODEC_H_
