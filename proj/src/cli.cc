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

#include "mvgl/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mvgl/byte_io.h"
#include "mvgl/container.h"
#include "mvgl/errors.h"
#include "mvgl/external_codec.h"
#include "mvgl/image_io.h"
#include "mvgl/metrics.h"
#include "mvgl/rate_allocator.h"
#include "mvgl/training.h"
#include "mvgl/weights_io.h"

namespace mvgl {

namespace fs = std::filesystem;

Grid ParseGrid(const std::string& text) {
  const size_t x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) throw 0;
    size_t used = 0;
    const unsigned long r = std::stoul(text.substr(0, x), &used);
    if (used != x) throw 0;
    const std::string rest = text.substr(x + 1);
    const unsigned long c = std::stoul(rest, &used);
    if (used != rest.size() || r == 0 || c == 0) throw 0;
    return {r, c};
  } catch (...) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid must look like RxC with R, C >= 1, got '" + text + "'");
  }
}

uint8_t ParseNetworkId(const std::string& text) {
  if (text == "A" || text == "a") return 0x00;
  if (text == "B" || text == "b") return 0x01;
  if (text == "C" || text == "c") return 0x02;
  if (text == "none" || text == "passthrough") return 0xFF;
  unsigned long v = 0;
  try {
    size_t used = 0;
    v = std::stoul(text, &used, 0);
    if (used != text.size()) throw 0;
  } catch (...) {
    throw Error(ErrorCode::kInvalidArgument, "bad network id '" + text + "'");
  }
  if (v > 0xFF || !IsKnownNetworkId(uint8_t(v))) {
    throw UnsupportedNetworkError(uint8_t(v & 0xFF));
  }
  return uint8_t(v);
}

std::string WeightsFileName(uint8_t id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02x.weights", id);
  return buf;
}

std::vector<std::string> ListImages(const std::string& path) {
  std::vector<std::string> out;
  if (!fs::is_directory(path)) {
    out.push_back(path);
    return out;
  }
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".ppm" || ext == ".pnm" || ext == ".pgm") {
      out.push_back(entry.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

int ExitFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInfeasible:
      return kExitInfeasible;
    case ErrorCode::kCodec:
      return kExitCodec;
    case ErrorCode::kIo:
    case ErrorCode::kTruncated:
    case ErrorCode::kFormat:
    case ErrorCode::kUnsupportedNetwork:
      return kExitIo;
    case ErrorCode::kConfig:
    case ErrorCode::kMissingModel:
      return kExitConfig;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kShape:
      return kExitUsage;
  }
  return kExitInternal;
}

// JSON cannot carry infinities; they are written as the string "inf".
nlohmann::json Number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

std::string Stem(const std::string& path) {
  return fs::path(path).stem().string();
}

struct GlobalFlags {
  uint64_t seed = 0;
  std::string codec_config = "toy";
  std::string grid = "2x2";
  std::string format = "csv";
};

// ---------------------------------------------------------------- train

struct TrainFlags {
  std::string dataset_dir;
  std::string output;
  std::string history;
  std::string cache_dir;
  std::string network_id = "B";
  std::string preset;
  size_t blocks = 8;
  size_t features = 96;
  size_t kernel = 3;
  float block_scale = 0.1f;
  float global_scale = 0.1f;
  double quality = 40;
  TrainingConfig train;
};

int RunTrain(const TrainFlags& f, const GlobalFlags& g, std::ostream& out,
             std::ostream& err) {
  const uint8_t id = ParseNetworkId(f.network_id);
  NetworkConfig net;
  if (!f.preset.empty()) {
    net = PresetConfig(NetworkId(ParseNetworkId(f.preset)));
  } else {
    net.blocks = f.blocks;
    net.feature_maps = f.features;
    net.kernel = f.kernel;
  }
  net.block_scale = f.block_scale;
  net.global_scale = f.global_scale;
  TrainingConfig cfg = f.train;
  cfg.seed = g.seed;
  ValidateTrainingConfig(cfg, net);

  if (!fs::is_directory(f.dataset_dir)) {
    throw Error(ErrorCode::kIo, "dataset directory not found: " + f.dataset_dir);
  }
  std::vector<std::string> names;
  std::vector<ImageTensor> pristine;
  for (const std::string& path : ListImages(f.dataset_dir)) {
    try {
      pristine.push_back(ReadPpm(path));
      names.push_back(path);
    } catch (const Error& e) {
      err << "warning: skipping " << path << ": " << e.what() << "\n";
    }
  }
  if (pristine.empty()) {
    throw Error(ErrorCode::kConfig, "no readable images in " + f.dataset_dir);
  }

  const auto codec = MakeCodec(g.codec_config);
  std::vector<ImageTensor> degraded;
  if (!f.cache_dir.empty()) fs::create_directories(f.cache_dir);
  for (size_t i = 0; i < pristine.size(); ++i) {
    std::string cached;
    if (!f.cache_dir.empty()) {
      cached = (fs::path(f.cache_dir) /
                (Stem(names[i]) + ".q" + FormatDouble(f.quality) + ".ppm"))
                   .string();
      if (fs::exists(cached)) {
        degraded.push_back(ReadPpm(cached));
        continue;
      }
    }
    degraded.push_back(codec->Decode(codec->Encode(pristine[i], f.quality)));
    if (!cached.empty()) WritePpm(cached, degraded.back());
  }

  std::ofstream history_file;
  std::ostream* history = nullptr;
  if (!f.history.empty()) {
    history_file.open(f.history, std::ios::trunc);
    if (!history_file) throw Error(ErrorCode::kIo, "cannot create " + f.history);
    history = &history_file;
  }
  const auto result = TrainOnPairs(
      pristine, degraded, net, cfg, [&](const EpochRecord& r) {
        if (history == nullptr) return;
        nlohmann::json j;
        j["epoch"] = r.epoch;
        j["lr"] = r.lr;
        j["train_loss"] = Number(r.train_loss);
        j["val_psnr"] = Number(r.val_psnr);
        *history << j.dump() << "\n";
      });
  SaveWeights(f.output, result.weights, id);
  WriteFileBytes(f.output + ".adam",
                 SerializeOptimizerSidecar(result.optimizer.m, result.optimizer.v,
                                           result.optimizer.t));
  out << "epochs " << result.history.size() << "\n"
      << "best_epoch " << result.best_epoch << "\n"
      << "best_val_psnr " << FormatDouble(result.best_val_psnr) << "\n"
      << "parameters " << result.weights.parameter_count() << "\n"
      << "weights " << f.output << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- encode

struct EncodeFlags {
  std::string input;
  std::string output;
  double quality = 40;
  std::string network_id = "none";
};

int RunEncode(const EncodeFlags& f, const GlobalFlags& g, std::ostream& out) {
  const uint8_t id = ParseNetworkId(f.network_id);
  const auto codec = MakeCodec(g.codec_config);
  const ImageTensor img = ReadPpm(f.input);
  const auto stream = EncodeImage(img, f.quality, id, *codec);
  WriteFileBytes(f.output, stream);
  out << "bytes " << stream.size() << "\n"
      << "bpp " << FormatDouble(BitsPerPixel(stream.size(), img.width(), img.height()))
      << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- decode

struct DecodeFlags {
  std::string input;
  std::string output;
  std::string weights_dir = ".";
  size_t mem_budget = 0;
  bool parallel = false;
};

int RunDecode(const DecodeFlags& f, const GlobalFlags& g, std::ostream& out) {
  const auto stream = ReadFileBytes(f.input);
  const Unwrapped u = Unwrap(stream);
  const uint8_t id = u.header.network_id;
  ModelSet models;
  if (id != uint8_t(NetworkId::kPassthrough)) {
    const std::string path = (fs::path(f.weights_dir) / WeightsFileName(id)).string();
    if (!fs::exists(path)) {
      throw Error(ErrorCode::kMissingModel, "missing weights " + path);
    }
    models[id] = LoadWeights(path).weights;
  }
  const auto codec = MakeCodec(g.codec_config);
  DecodeOptions options;
  options.grid = ParseGrid(g.grid);
  options.parallel = f.parallel;
  if (f.mem_budget > 0 && !models.empty()) {
    const ImageTensor base = codec->Decode(u.payload);
    options.grid = GridForMemoryBudget(base.height(), base.width(),
                                       models.begin()->second.config, f.mem_budget);
  }
  const ImageTensor img = DecodeImage(stream, models, *codec, options);
  WritePpm(f.output, img);
  char id_text[8];
  std::snprintf(id_text, sizeof(id_text), "0x%02X", id);
  out << "network " << id_text << "\n"
      << "grid " << options.grid.rows << "x" << options.grid.cols << "\n"
      << "size " << img.width() << "x" << img.height() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- allocate

struct AllocateFlags {
  std::string instance;
  std::string corpus;
  std::vector<double> qualities;
  uint64_t limit = 0;
  double bpp = 0;
  std::string output;
  std::string write_instance;
};

int RunAllocate(const AllocateFlags& f, const GlobalFlags& g, std::ostream& out) {
  AllocationInstance inst;
  std::vector<std::string> names;
  if (!f.instance.empty() == !f.corpus.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "allocate needs exactly one of --instance or --corpus");
  }
  if (!f.instance.empty()) {
    const auto bytes = ReadFileBytes(f.instance);
    inst = ParseInstance(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                          bytes.size()));
    if (f.limit > 0) inst.limit = f.limit;
  } else {
    if (f.qualities.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "corpus mode needs --qualities");
    }
    const auto codec = MakeCodec(g.codec_config);
    size_t total_pixels = 0;
    for (const std::string& path : ListImages(f.corpus)) {
      const ImageTensor img = ReadPpm(path);
      total_pixels += img.plane_size();
      std::vector<RateOption> opts;
      for (double q : f.qualities) {
        const auto payload = codec->Encode(img, q);
        const ImageTensor dec = codec->Decode(payload);
        // The selector byte counts toward the budget.
        opts.push_back({uint64_t(payload.size() + 1), SumSquaredError(img, dec)});
      }
      inst.images.push_back(std::move(opts));
      names.push_back(path);
    }
    if (inst.images.empty()) {
      throw Error(ErrorCode::kIo, "no images found in " + f.corpus);
    }
    if (f.limit > 0) {
      inst.limit = f.limit;
    } else if (f.bpp > 0) {
      inst.limit = uint64_t(std::floor(f.bpp * double(total_pixels) / 8.0));
    } else {
      throw Error(ErrorCode::kInvalidArgument, "corpus mode needs --limit or --bpp");
    }
  }
  if (!f.write_instance.empty()) {
    const std::string text = FormatInstance(inst);
    WriteFileBytes(f.write_instance,
                   std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
  }
  const Allocation alloc = Solve(inst);
  std::ostringstream report;
  report.precision(17);
  report << "objective " << Objective(inst, alloc) << "\n"
         << "size " << TotalSize(inst, alloc) << "\n"
         << "limit " << inst.limit << "\n"
         << "choices";
  for (size_t c : alloc.choice) report << ' ' << c;
  report << "\n";
  for (size_t i = 0; i < names.size(); ++i) {
    const size_t j = alloc.choice[i];
    report << "image " << names[i] << " option " << j << " quality "
           << f.qualities[j] << " size " << inst.images[i][j].size
           << " distortion " << inst.images[i][j].distortion << "\n";
  }
  out << report.str();
  if (!f.output.empty()) {
    const std::string text = report.str();
    WriteFileBytes(f.output,
                   std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateFlags {
  std::vector<std::string> originals;
  std::vector<std::string> decoded;
  std::vector<std::string> streams;
};

std::vector<std::string> ExpandPaths(const std::vector<std::string>& paths) {
  if (paths.size() == 1) return ListImages(paths[0]);
  return paths;
}

std::vector<std::string> ExpandStreams(const std::vector<std::string>& paths) {
  if (paths.size() != 1 || !fs::is_directory(paths[0])) return paths;
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(paths[0])) {
    if (entry.is_regular_file()) out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

int RunEvaluate(const EvaluateFlags& f, const GlobalFlags& g, std::ostream& out) {
  const auto originals = ExpandPaths(f.originals);
  const auto decoded = ExpandPaths(f.decoded);
  const auto streams = ExpandStreams(f.streams);
  if (originals.size() != decoded.size() ||
      (!streams.empty() && streams.size() != originals.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "evaluate: file counts differ (originals " +
                    std::to_string(originals.size()) + ", decoded " +
                    std::to_string(decoded.size()) + ", streams " +
                    std::to_string(streams.size()) + ")");
  }
  if (g.format != "csv" && g.format != "json-lines") {
    throw Error(ErrorCode::kInvalidArgument, "format must be csv or json-lines");
  }
  std::vector<ImageTensor> a, b;
  std::vector<EvaluationItem> items;
  for (size_t i = 0; i < originals.size(); ++i) {
    a.push_back(ReadPpm(originals[i]));
    b.push_back(ReadPpm(decoded[i]));
  }
  for (size_t i = 0; i < originals.size(); ++i) {
    EvaluationItem item;
    item.name = originals[i];
    item.original = &a[i];
    item.decoded = &b[i];
    if (!streams.empty()) item.stream_bytes = fs::file_size(streams[i]);
    items.push_back(item);
  }
  const CorpusReport report = MakeCorpusReport(items);
  if (g.format == "csv") {
    out << "image,psnr_db,ms_ssim,bpp\n";
    for (const auto& r : report.images) {
      out << r.name << ',' << FormatDouble(r.quality.psnr_db) << ','
          << FormatDouble(r.quality.ms_ssim) << ',' << FormatDouble(r.quality.bpp)
          << "\n";
    }
    out << "average," << FormatDouble(report.aggregate.psnr_db) << ','
        << FormatDouble(report.aggregate.ms_ssim) << ','
        << FormatDouble(report.aggregate.bpp) << "\n";
  } else {
    for (const auto& r : report.images) {
      nlohmann::json j;
      j["image"] = r.name;
      j["psnr_db"] = Number(r.quality.psnr_db);
      j["ms_ssim"] = Number(r.quality.ms_ssim);
      j["bpp"] = Number(r.quality.bpp);
      out << j.dump() << "\n";
    }
    nlohmann::json j;
    j["aggregate"] = true;
    j["images"] = report.images.size();
    j["psnr_db"] = Number(report.aggregate.psnr_db);
    j["ms_ssim"] = Number(report.aggregate.ms_ssim);
    j["bpp"] = Number(report.aggregate.bpp);
    j["mean_image_bpp"] = Number(report.mean_image_bpp);
    out << j.dump() << "\n";
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Learned compression-artifact removal toolkit", "mvgl"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--codec-config", g.codec_config,
                 "codec config file, or 'toy' for the built-in toy codec");
  app.add_option("--grid", g.grid, "tile grid RxC for decoding");
  app.add_option("--format", g.format, "report format: csv or json-lines");

  TrainFlags tf;
  auto* train = app.add_subcommand("train", "train a post-processing network");
  train->add_option("dataset", tf.dataset_dir, "directory of PPM images")->required();
  train->add_option("-o,--output", tf.output, "weights file to write")->required();
  train->add_option("--history", tf.history, "JSON-lines training history");
  train->add_option("--cache-dir", tf.cache_dir, "cache for degraded inputs");
  train->add_option("--network-id", tf.network_id, "selector id stored in the file");
  train->add_option("--preset", tf.preset, "A, B or C architecture");
  train->add_option("--blocks", tf.blocks, "residual blocks B");
  train->add_option("--features", tf.features, "feature maps n");
  train->add_option("--kernel", tf.kernel, "kernel size k");
  train->add_option("--block-scale", tf.block_scale);
  train->add_option("--global-scale", tf.global_scale);
  train->add_option("--quality", tf.quality, "codec quality for degraded inputs");
  train->add_option("--batch", tf.train.batch_size);
  train->add_option("--crop", tf.train.crop);
  train->add_option("--lr", tf.train.lr0);
  train->add_option("--lr-half-period", tf.train.lr_half_period);
  train->add_option("--patience", tf.train.patience);
  train->add_option("--epochs", tf.train.max_epochs, "epoch cap");
  train->add_option("--val-fraction", tf.train.validation_fraction);
  train->add_option("--threads", tf.train.threads);
  train->add_flag("--drop-last", tf.train.drop_last);

  EncodeFlags ef;
  auto* encode = app.add_subcommand("encode", "encode an image into a .mvgl stream");
  encode->add_option("input", ef.input, "PPM image")->required();
  encode->add_option("-o,--output", ef.output, ".mvgl file")->required();
  encode->add_option("--quality", ef.quality, "codec quality");
  encode->add_option("--network-id", ef.network_id, "A, B, C, none or a byte");

  DecodeFlags df;
  auto* decode = app.add_subcommand("decode", "decode and post-process a .mvgl stream");
  decode->add_option("input", df.input, ".mvgl file")->required();
  decode->add_option("-o,--output", df.output, "PPM image")->required();
  decode->add_option("--weights-dir", df.weights_dir, "directory of <id>.weights");
  decode->add_option("--mem-budget", df.mem_budget,
                     "bytes; picks the smallest grid that fits");
  decode->add_flag("--parallel", df.parallel, "run tiles concurrently");

  AllocateFlags af;
  auto* allocate = app.add_subcommand("allocate", "choose per-image quality under a size budget");
  allocate->add_option("--instance", af.instance, "instance file");
  allocate->add_option("--corpus", af.corpus, "directory of PPM images");
  allocate->add_option("--qualities", af.qualities, "candidate qualities")->delimiter(',');
  allocate->add_option("--limit", af.limit, "total size budget in bytes");
  allocate->add_option("--bpp", af.bpp, "budget as average bits per pixel");
  allocate->add_option("-o,--output", af.output, "assignment file");
  allocate->add_option("--write-instance", af.write_instance,
                       "also write the built instance");

  EvaluateFlags vf;
  auto* evaluate = app.add_subcommand("evaluate", "quality and rate report");
  evaluate->add_option("--originals", vf.originals, "images or a directory")->required();
  evaluate->add_option("--decoded", vf.decoded, "images or a directory")->required();
  evaluate->add_option("--streams", vf.streams, "stream files or a directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return RunTrain(tf, g, out, err);
    if (*encode) return RunEncode(ef, g, out);
    if (*decode) return RunDecode(df, g, out);
    if (*allocate) return RunAllocate(af, g, out);
    if (*evaluate) return RunEvaluate(vf, g, out);
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n"
        << "minimal achievable size " << e.min_total_size() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return ExitFor(e);
  } catch (const fs::filesystem_error& e) {
    err << "error (io): " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace mvgl
