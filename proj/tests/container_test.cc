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

#include "mvgl/container.h"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "mvgl/errors.h"
#include "mvgl/synthetic.h"
#include "mvgl/toy_codec.h"
#include "test_util.h"

namespace mvgl {
namespace {

const uint8_t kIds[] = {0x00, 0x01, 0x02, 0xFF};

TEST(WrapTest, Examples) {
  EXPECT_EQ(Wrap(0x00, {}), (std::vector<uint8_t>{0x00}));
  const std::vector<uint8_t> p = {0xAB, 0xCD};
  EXPECT_EQ(Wrap(0x01, p), (std::vector<uint8_t>{0x01, 0xAB, 0xCD}));
  const std::vector<uint8_t> s = {0x02, 0x01};
  const Unwrapped u = Unwrap(s);
  EXPECT_EQ(u.header.network_id, 0x02);
  EXPECT_EQ(u.payload, (std::vector<uint8_t>{0x01}));
}

TEST(WrapTest, RandomRoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<size_t> len(0, 500);
  for (int i = 0; i < 200; ++i) {
    const uint8_t id = kIds[rng() % 4];
    std::vector<uint8_t> payload(len(rng));
    for (uint8_t& b : payload) b = uint8_t(rng());
    const auto stream = Wrap(id, payload);
    EXPECT_EQ(stream.size(), payload.size() + 1);
    const Unwrapped u = Unwrap(stream);
    EXPECT_EQ(u.header.network_id, id);
    EXPECT_EQ(u.payload, payload);
  }
}

TEST(WrapTest, Errors) {
  try {
    Unwrap({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncated);
  }
  const std::vector<uint8_t> bad = {0x07, 0x00};
  try {
    Unwrap(bad);
    FAIL();
  } catch (const UnsupportedNetworkError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedNetwork);
    EXPECT_EQ(e.id(), 0x07);
    EXPECT_NE(std::string(e.what()).find("0x07"), std::string::npos);
  }
  EXPECT_THROW(Wrap(0x03, {}), UnsupportedNetworkError);
  for (int id = 0; id < 256; ++id) {
    const bool known = id <= 2 || id == 0xFF;
    EXPECT_EQ(IsKnownNetworkId(uint8_t(id)), known);
  }
}

NetworkConfig Small() {
  NetworkConfig c;
  c.blocks = 1;
  c.feature_maps = 4;
  return c;
}

TEST(DecodeImageTest, PassthroughIsCodecOutput) {
  ToyCodec codec;
  const ImageTensor img = SyntheticTexturedImage(24, 30, 1);
  const auto stream = EncodeImage(img, 20, 0xFF, codec);
  EXPECT_EQ(stream.size(), codec.Encode(img, 20).size() + 1);
  EXPECT_EQ(DecodeImage(stream, {}, codec), codec.Decode(codec.Encode(img, 20)));
}

TEST(DecodeImageTest, ZeroModelIsQuantizedCodecOutput) {
  ToyCodec codec;
  const ImageTensor img = SyntheticTexturedImage(24, 30, 2);
  ModelSet models;
  models[0x01] = ModelWeights::Zeros(Small());
  const auto stream = EncodeImage(img, 20, 0x01, codec);
  EXPECT_EQ(DecodeImage(stream, models, codec),
            QuantizeTo8Bit(codec.Decode(codec.Encode(img, 20))));
}

TEST(DecodeImageTest, AppliesTiledModel) {
  ToyCodec codec;
  std::mt19937_64 rng(3);
  const ImageTensor img = SyntheticTexturedImage(40, 36, 3);
  ModelSet models;
  models[0x00] = testing::RandomModel(Small(), rng, 0.05);
  const auto stream = EncodeImage(img, 30, 0x00, codec);
  const ImageTensor base = codec.Decode(codec.Encode(img, 30));
  DecodeOptions opt;
  opt.grid = {3, 3};
  opt.parallel = true;
  EXPECT_EQ(DecodeImage(stream, models, codec, opt),
            QuantizeTo8Bit(NetworkForward(base, models[0x00])));
}

TEST(DecodeImageTest, MissingModel) {
  ToyCodec codec;
  const auto stream = EncodeImage(SyntheticTexturedImage(8, 8, 4), 20, 0x02, codec);
  try {
    DecodeImage(stream, {}, codec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingModel);
  }
}

TEST(DecodeImageTest, CodecFailurePropagates) {
  ToyCodec codec;
  const std::vector<uint8_t> stream = {0xFF, 'J', 'U', 'N', 'K'};
  try {
    DecodeImage(stream, {}, codec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCodec);
  }
}

}  // namespace
}  // namespace mvgl
