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

#include "mvgl/external_codec.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "mvgl/byte_io.h"
#include "mvgl/errors.h"
#include "mvgl/image_io.h"
#include "mvgl/toy_codec.h"

namespace mvgl {

namespace fs = std::filesystem;

std::map<std::string, std::string> ParseKeyValueConfig(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  auto trim = [](std::string s) {
    const size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == '[') continue;
    const size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kFormat,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (!value.empty() && value[0] == '"') {
      const size_t close = value.find('"', 1);
      if (close == std::string::npos) {
        throw Error(ErrorCode::kFormat,
                    "config line " + std::to_string(line_no) + ": unterminated string");
      }
      value = value.substr(1, close - 1);
    } else {
      const size_t hash = value.find('#');
      if (hash != std::string::npos) value = trim(value.substr(0, hash));
    }
    if (key.empty()) {
      throw Error(ErrorCode::kFormat,
                  "config line " + std::to_string(line_no) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

ExternalCodecConfig ParseExternalCodecConfig(std::string_view text) {
  const auto kv = ParseKeyValueConfig(text);
  ExternalCodecConfig c;
  auto get = [&](const char* key, bool required) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) {
      if (required) {
        throw Error(ErrorCode::kFormat,
                    std::string("codec config: missing key '") + key + "'");
      }
      return {};
    }
    return it->second;
  };
  c.encoder = get("encoder", true);
  c.decoder = get("decoder", true);
  if (const std::string q = get("quality_format", false); !q.empty()) {
    if (q != "int" && q != "float") {
      throw Error(ErrorCode::kFormat, "codec config: quality_format must be int or float");
    }
    c.quality_format = q;
  }
  return c;
}

ExternalCodec::ExternalCodec(ExternalCodecConfig config)
    : config_(std::move(config)) {}

std::string ExternalCodec::Expand(const std::string& tmpl,
                                  const std::string& input,
                                  const std::string& output,
                                  const std::string& quality) {
  std::string out;
  size_t pos = 0;
  while (pos < tmpl.size()) {
    if (tmpl[pos] == '{') {
      const size_t close = tmpl.find('}', pos);
      if (close != std::string::npos) {
        const std::string name = tmpl.substr(pos + 1, close - pos - 1);
        if (name == "input" || name == "output" || name == "quality") {
          out += name == "input" ? input : name == "output" ? output : quality;
          pos = close + 1;
          continue;
        }
      }
    }
    out += tmpl[pos++];
  }
  return out;
}

namespace {

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') {
      out += "'\\''";
    } else {
      out += ch;
    }
  }
  return out + "'";
}

// Private scratch directory, removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "mvgl-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) {
      throw Error(ErrorCode::kCodec, "cannot create temporary directory");
    }
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::string File(const char* name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void RunTool(const std::string& command, const ScratchDir& dir) {
  const std::string log = dir.File("stderr.log");
  const std::string full = command + " 2>" + ShellQuote(log);
  const int status = std::system(full.c_str());
  if (status == 0) return;
  std::string diag;
  try {
    const auto bytes = ReadFileBytes(log);
    diag.assign(bytes.begin(), bytes.end());
    if (diag.size() > 2000) diag = diag.substr(diag.size() - 2000);
  } catch (const Error&) {
  }
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : status;
  throw Error(ErrorCode::kCodec, "external codec command failed (status " +
                                     std::to_string(code) + "): " + command +
                                     (diag.empty() ? "" : "\n" + diag));
}

}  // namespace

std::vector<uint8_t> ExternalCodec::Encode(const ImageTensor& img,
                                           double quality) const {
  ScratchDir dir;
  const std::string in = dir.File("input.ppm");
  const std::string out = dir.File("stream.bin");
  WritePpm(in, img);
  std::string q;
  if (config_.quality_format == "int") {
    q = std::to_string(std::llround(quality));
  } else {
    std::ostringstream s;
    s << quality;
    q = s.str();
  }
  RunTool(Expand(config_.encoder, ShellQuote(in), ShellQuote(out), q), dir);
  try {
    return ReadFileBytes(out);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCodec, std::string("encoder produced no output: ") + e.what());
  }
}

ImageTensor ExternalCodec::Decode(std::span<const uint8_t> payload) const {
  ScratchDir dir;
  const std::string in = dir.File("stream.bin");
  const std::string out = dir.File("decoded.ppm");
  WriteFileBytes(in, payload);
  RunTool(Expand(config_.decoder, ShellQuote(in), ShellQuote(out), ""), dir);
  try {
    return ReadPpm(out);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCodec, std::string("decoder output unreadable: ") + e.what());
  }
}

std::unique_ptr<Codec> MakeCodec(const std::string& config_path) {
  if (config_path.empty() || config_path == "toy") {
    return std::make_unique<ToyCodec>();
  }
  const auto bytes = ReadFileBytes(config_path);
  return std::make_unique<ExternalCodec>(ParseExternalCodecConfig(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size())));
}

}  // namespace mvgl
