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

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mvgl/byte_io.h"
#include "mvgl/container.h"
#include "mvgl/errors.h"
#include "mvgl/image_io.h"
#include "mvgl/metrics.h"
#include "mvgl/rate_allocator.h"
#include "mvgl/synthetic.h"
#include "mvgl/toy_codec.h"
#include "mvgl/weights_io.h"
#include "test_util.h"

namespace mvgl {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

// Value following `key ` on its own line of `text`.
std::string Field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

void WriteCorpus(const std::string& dir, size_t count, size_t h, size_t w,
                 uint64_t seed) {
  fs::create_directories(dir);
  const auto images = SyntheticCorpus(count, h, w, seed);
  for (size_t i = 0; i < images.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "img%02zu.ppm", i);
    WritePpm((fs::path(dir) / name).string(), images[i]);
  }
}

TEST(CliHelpersTest, ParseGrid) {
  EXPECT_EQ(ParseGrid("2x2"), (Grid{2, 2}));
  EXPECT_EQ(ParseGrid("3X1"), (Grid{3, 1}));
  for (const char* bad : {"", "2", "0x2", "2x", "ax2", "2x2x"}) {
    EXPECT_THROW(ParseGrid(bad), Error) << bad;
  }
}

TEST(CliHelpersTest, ParseNetworkId) {
  EXPECT_EQ(ParseNetworkId("A"), 0x00);
  EXPECT_EQ(ParseNetworkId("b"), 0x01);
  EXPECT_EQ(ParseNetworkId("C"), 0x02);
  EXPECT_EQ(ParseNetworkId("none"), 0xFF);
  EXPECT_EQ(ParseNetworkId("0xff"), 0xFF);
  EXPECT_EQ(ParseNetworkId("2"), 0x02);
  EXPECT_THROW(ParseNetworkId("7"), UnsupportedNetworkError);
  EXPECT_THROW(ParseNetworkId("x"), Error);
  EXPECT_EQ(WeightsFileName(0x01), "01.weights");
  EXPECT_EQ(WeightsFileName(0xFF), "ff.weights");
}

TEST(CliHelpersTest, ListImagesSortsAndFilters) {
  testing::TempDir dir;
  WriteText(dir / "b.ppm", "");
  WriteText(dir / "a.PPM", "");
  WriteText(dir / "notes.txt", "");
  const auto list = ListImages(dir.path());
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(fs::path(list[0]).filename(), "a.PPM");
  EXPECT_EQ(fs::path(list[1]).filename(), "b.ppm");
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"encode"}).code, kExitUsage);
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
}

TEST(CliTest, TrainWritesWeightsAndIsDeterministic) {
  testing::TempDir dir;
  WriteCorpus(dir / "data", 8, 24, 24, 1);
  WriteText(dir / "data/broken.ppm", "P6 garbage");
  const std::vector<std::string> base = {
      "--seed", "5", "train", dir / "data", "--blocks", "1", "--features", "4",
      "--batch", "4", "--crop", "16", "--epochs", "3", "--quality", "30",
      "--network-id", "A"};
  auto args = base;
  args.insert(args.end(), {"-o", dir / "a.weights", "--history", dir / "h.jsonl",
                           "--cache-dir", dir / "cache"});
  const CliRun r = Cli(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("broken.ppm"), std::string::npos);
  EXPECT_EQ(Field(r.out, "epochs"), "3");
  NetworkConfig c;
  c.blocks = 1;
  c.feature_maps = 4;
  EXPECT_EQ(Field(r.out, "parameters"), std::to_string(ParameterCount(c)));
  const StoredModel m = LoadWeights(dir / "a.weights");
  EXPECT_EQ(m.network_id, 0x00);
  EXPECT_EQ(m.weights.parameter_count(), ParameterCount(c));
  EXPECT_EQ(fs::file_size(dir / "a.weights.adam"), 8 * ParameterCount(c) + 8);
  std::ifstream h(dir / "h.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(h, line)) {
    ++lines;
    EXPECT_NE(line.find("\"val_psnr\""), std::string::npos);
  }
  EXPECT_EQ(lines, 3);
  EXPECT_EQ(ListImages(dir / "cache").size(), 8u);

  // A second run reuses the cache and reproduces the weights byte for byte.
  args = base;
  args.insert(args.end(), {"-o", dir / "b.weights", "--cache-dir", dir / "cache"});
  ASSERT_EQ(Cli(args).code, kExitOk);
  EXPECT_EQ(ReadFileBytes(dir / "a.weights"), ReadFileBytes(dir / "b.weights"));
}

TEST(CliTest, TrainOnEmptyDirFails) {
  testing::TempDir dir;
  fs::create_directories(dir / "empty");
  const CliRun r = Cli({"train", dir / "empty", "-o", dir / "w"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("no readable images"), std::string::npos);
  EXPECT_EQ(Cli({"train", dir / "missing", "-o", dir / "w"}).code, kExitIo);
}

TEST(CliTest, PassthroughRoundTripEqualsCodec) {
  testing::TempDir dir;
  const ImageTensor img = SyntheticTexturedImage(30, 41, 2);
  WritePpm(dir / "in.ppm", img);
  CliRun r = Cli({"encode", dir / "in.ppm", "-o", dir / "s.mvgl", "--quality", "25"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  ToyCodec codec;
  const auto payload = codec.Encode(img, 25);
  EXPECT_EQ(Field(r.out, "bytes"), std::to_string(payload.size() + 1));
  EXPECT_EQ(ReadFileBytes(dir / "s.mvgl"), Wrap(0xFF, payload));
  r = Cli({"decode", dir / "s.mvgl", "-o", dir / "out.ppm"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(ReadPpm(dir / "out.ppm"), codec.Decode(payload));
}

TEST(CliTest, DecodeWithModelAndErrors) {
  testing::TempDir dir;
  const ImageTensor img = SyntheticTexturedImage(40, 40, 3);
  WritePpm(dir / "in.ppm", img);
  ASSERT_EQ(Cli({"encode", dir / "in.ppm", "-o", dir / "s.mvgl", "--network-id",
                 "B"}).code,
            kExitOk);
  fs::create_directories(dir / "w");
  // Missing weights.
  EXPECT_EQ(Cli({"decode", dir / "s.mvgl", "-o", dir / "o.ppm", "--weights-dir",
                 dir / "w"}).code,
            kExitConfig);
  NetworkConfig c;
  c.blocks = 1;
  c.feature_maps = 4;
  std::mt19937_64 rng(1);
  const ModelWeights m = testing::RandomModel(c, rng, 0.05);
  SaveWeights(dir / "w/01.weights", m, 0x01);
  const CliRun r = Cli({"--grid", "3x2", "decode", dir / "s.mvgl", "-o", dir / "o.ppm",
                     "--weights-dir", dir / "w", "--parallel"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Field(r.out, "grid"), "3x2");
  ToyCodec codec;
  const ImageTensor want =
      QuantizeTo8Bit(NetworkForward(codec.Decode(codec.Encode(img, 40)), m));
  EXPECT_EQ(ReadPpm(dir / "o.ppm"), want);
  const CliRun budget = Cli({"decode", dir / "s.mvgl", "-o", dir / "o2.ppm",
                          "--weights-dir", dir / "w", "--mem-budget", "1000000000"});
  ASSERT_EQ(budget.code, kExitOk) << budget.err;
  EXPECT_EQ(Field(budget.out, "grid"), "1x1");
  EXPECT_EQ(ReadPpm(dir / "o2.ppm"), want);

  WriteText(dir / "empty.mvgl", "");
  const CliRun empty = Cli({"decode", dir / "empty.mvgl", "-o", dir / "x.ppm"});
  EXPECT_EQ(empty.code, kExitIo);
  EXPECT_NE(empty.err.find("truncated"), std::string::npos) << empty.err;
  WriteText(dir / "bad.mvgl", "\x07zz");
  const CliRun bad = Cli({"decode", dir / "bad.mvgl", "-o", dir / "x.ppm"});
  EXPECT_EQ(bad.code, kExitIo);
  EXPECT_NE(bad.err.find("0x07"), std::string::npos) << bad.err;
  WriteText(dir / "junk.mvgl", "\xFFjunk");
  EXPECT_EQ(Cli({"decode", dir / "junk.mvgl", "-o", dir / "x.ppm"}).code,
            kExitCodec);
}

TEST(CliTest, TrainedModelBeatsPassthroughOnHeldOut) {
  testing::TempDir dir;
  WriteCorpus(dir / "train", 16, 64, 64, 1);
  WriteCorpus(dir / "held", 4, 64, 64, 2);
  fs::create_directories(dir / "w");
  const CliRun t = Cli({"--seed", "1", "train", dir / "train", "-o",
                        dir / "w/01.weights", "--blocks", "2", "--features", "16",
                        "--batch", "8", "--crop", "48", "--quality", "50",
                        "--epochs", "40", "--patience", "20", "--network-id", "B"});
  ASSERT_EQ(t.code, kExitOk) << t.err;
  fs::create_directories(dir / "post");
  fs::create_directories(dir / "pass");
  for (const std::string& name : ListImages(dir / "held")) {
    const std::string stem = fs::path(name).stem().string();
    for (const char* id : {"B", "none"}) {
      const std::string sub = std::string(id) == "B" ? "post/" : "pass/";
      ASSERT_EQ(Cli({"encode", name, "-o", dir / (sub + stem + ".mvgl"),
                     "--quality", "50", "--network-id", id}).code,
                kExitOk);
      ASSERT_EQ(Cli({"decode", dir / (sub + stem + ".mvgl"), "-o",
                     dir / (sub + stem + ".ppm"), "--weights-dir", dir / "w"})
                    .code,
                kExitOk);
    }
  }
  auto mean_psnr = [&](const std::string& decoded) {
    const CliRun r = Cli({"evaluate", "--originals", dir / "held", "--decoded",
                          dir / decoded});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    const std::string last = r.out.substr(r.out.rfind("average,") + 8);
    return std::stod(last);
  };
  EXPECT_GT(mean_psnr("post"), mean_psnr("pass"));
}

TEST(CliTest, AllocateInstanceFile) {
  testing::TempDir dir;
  WriteText(dir / "tie.txt", "2 2 9\n3:10 5:4\n4:8 6:2\n");
  CliRun r = Cli({"allocate", "--instance", dir / "tie.txt", "-o", dir / "a.txt"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Field(r.out, "choices"), "0 1");
  EXPECT_EQ(Field(r.out, "objective"), "12");
  EXPECT_EQ(Field(r.out, "size"), "9");
  const auto saved = ReadFileBytes(dir / "a.txt");
  EXPECT_EQ(std::string(saved.begin(), saved.end()), r.out);

  WriteText(dir / "forced.txt", "3 1 20\n5:1\n6:2\n7:3\n");
  r = Cli({"allocate", "--instance", dir / "forced.txt"});
  EXPECT_EQ(Field(r.out, "choices"), "0 0 0");

  r = Cli({"allocate", "--instance", dir / "tie.txt", "--limit", "6"});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(r.err.find("minimal achievable size 7"), std::string::npos) << r.err;
  WriteText(dir / "bad.txt", "2 2\n");
  EXPECT_EQ(Cli({"allocate", "--instance", dir / "bad.txt"}).code, kExitIo);
  EXPECT_EQ(Cli({"allocate"}).code, kExitUsage);
}

TEST(CliTest, AllocateCorpusMatchesRecomputedEncodes) {
  testing::TempDir dir;
  WriteCorpus(dir / "c", 3, 32, 24, 4);
  const CliRun r = Cli({"allocate", "--corpus", dir / "c", "--qualities", "10,20,40",
                     "--bpp", "14", "--write-instance", dir / "inst.txt"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = ReadFileBytes(dir / "inst.txt");
  const AllocationInstance inst =
      ParseInstance(std::string(text.begin(), text.end()));
  ToyCodec codec;
  const auto names = ListImages(dir / "c");
  ASSERT_EQ(inst.images.size(), 3u);
  const double qualities[] = {10, 20, 40};
  for (size_t i = 0; i < 3; ++i) {
    const ImageTensor img = ReadPpm(names[i]);
    for (size_t j = 0; j < 3; ++j) {
      const auto payload = codec.Encode(img, qualities[j]);
      EXPECT_EQ(inst.images[i][j].size, payload.size() + 1);
      EXPECT_DOUBLE_EQ(inst.images[i][j].distortion,
                       SumSquaredError(img, codec.Decode(payload)));
    }
  }
  EXPECT_EQ(inst.limit, uint64_t(14.0 * 3 * 32 * 24 / 8));
  const Allocation best = Solve(inst);
  std::string want;
  for (size_t c : best.choice) want += (want.empty() ? "" : " ") + std::to_string(c);
  EXPECT_EQ(Field(r.out, "choices"), want);
}

TEST(CliTest, EvaluateReports) {
  testing::TempDir dir;
  WriteCorpus(dir / "o", 2, 40, 40, 5);
  CliRun r = Cli({"evaluate", "--originals", dir / "o", "--decoded", dir / "o"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("image,psnr_db,ms_ssim,bpp"), std::string::npos);
  EXPECT_NE(r.out.find("average,inf,1,0"), std::string::npos) << r.out;

  // Toy-decoded copies with their streams.
  fs::create_directories(dir / "d");
  fs::create_directories(dir / "s");
  ToyCodec codec;
  std::vector<EvaluationItem> items;
  std::vector<ImageTensor> orig, dec;
  const auto names = ListImages(dir / "o");
  for (const auto& n : names) {
    orig.push_back(ReadPpm(n));
    const auto stream = Wrap(0xFF, codec.Encode(orig.back(), 30));
    dec.push_back(codec.Decode(Unwrap(stream).payload));
    const std::string stem = fs::path(n).stem().string();
    WritePpm(dir / ("d/" + stem + ".ppm"), dec.back());
    WriteFileBytes(dir / ("s/" + stem + ".mvgl"), stream);
  }
  for (size_t i = 0; i < names.size(); ++i) {
    items.push_back({names[i], &orig[i], &dec[i],
                     fs::file_size(dir / ("s/" + fs::path(names[i]).stem().string() +
                                          ".mvgl"))});
  }
  const CorpusReport want = MakeCorpusReport(items);
  r = Cli({"--format", "json-lines", "evaluate", "--originals", dir / "o",
           "--decoded", dir / "d", "--streams", dir / "s"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string last = r.out.substr(r.out.rfind('{'));
  const auto field = [&](const std::string& key) {
    const size_t p = last.find("\"" + key + "\":");
    return std::stod(last.substr(p + key.size() + 3));
  };
  EXPECT_NEAR(field("psnr_db"), want.aggregate.psnr_db, 1e-9);
  EXPECT_NEAR(field("ms_ssim"), want.aggregate.ms_ssim, 1e-12);
  EXPECT_NEAR(field("bpp"), want.aggregate.bpp, 1e-12);

  r = Cli({"evaluate", "--originals", dir / "o", "--decoded", names[0]});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("counts differ"), std::string::npos);
}

TEST(CliTest, CodecFailureExitCode) {
  testing::TempDir dir;
  WritePpm(dir / "in.ppm", SyntheticTexturedImage(8, 8, 6));
  WriteText(dir / "codec.toml", "encoder = \"exit 9\"\ndecoder = \"exit 9\"\n");
  const CliRun r = Cli({"--codec-config", dir / "codec.toml", "encode", dir / "in.ppm",
                     "-o", dir / "s.mvgl"});
  EXPECT_EQ(r.code, kExitCodec);
  EXPECT_EQ(Cli({"encode", dir / "missing.ppm", "-o", dir / "s.mvgl"}).code, kExitIo);
}

// The installed binary maps the same codes to its process exit status.
TEST(CliBinaryTest, ExitStatus) {
  testing::TempDir dir;
  const std::string tool = MVGL_TOOL_PATH;
  auto status = [&](const std::string& args) {
    const int s = std::system((tool + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  WriteText(dir / "tie.txt", "2 2 9\n3:10 5:4\n4:8 6:2\n");
  WriteText(dir / "empty.mvgl", "");
  EXPECT_EQ(status("allocate --instance " + (dir / "tie.txt")), kExitOk);
  EXPECT_EQ(status("allocate --instance " + (dir / "tie.txt") + " --limit 1"),
            kExitInfeasible);
  EXPECT_EQ(status("decode " + (dir / "empty.mvgl") + " -o " + (dir / "x.ppm")),
            kExitIo);
  EXPECT_EQ(status("nonsense"), kExitUsage);
}

}  // namespace
}  // namespace mvgl
