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

#include "mvgl/toy_codec.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mvgl/errors.h"
#include "mvgl/synthetic.h"
#include "test_util.h"

namespace mvgl {
namespace {

// Worst-case pixel error when every coefficient is off by at most step / 2:
// the 2-D basis is separable, so the bound is step / 2 times the largest
// product of 1-D absolute column sums, plus 0.5 for the final rounding.
double ErrorBound(double step) {
  const auto& b = DctBasis();
  double col = 0;
  for (size_t x = 0; x < 8; ++x) {
    double s = 0;
    for (size_t u = 0; u < 8; ++u) s += std::abs(b[u][x]);
    col = std::max(col, s);
  }
  return step / 2 * col * col + 0.5;
}

TEST(DctBasisTest, Orthonormal) {
  const auto& b = DctBasis();
  for (size_t u = 0; u < 8; ++u) {
    for (size_t v = 0; v < 8; ++v) {
      double dot = 0;
      for (size_t x = 0; x < 8; ++x) dot += b[u][x] * b[v][x];
      EXPECT_NEAR(dot, u == v ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(ZigzagTest, PermutationWithJpegPrefix) {
  const auto& z = ZigzagOrder();
  EXPECT_EQ(std::set<uint8_t>(z.begin(), z.end()).size(), 64u);
  EXPECT_EQ(*std::max_element(z.begin(), z.end()), 63);
  const uint8_t prefix[] = {0, 1, 8, 16, 9, 2, 3, 10, 17, 24};
  for (size_t i = 0; i < 10; ++i) EXPECT_EQ(z[i], prefix[i]) << i;
  EXPECT_EQ(z[63], 63);
}

TEST(ToyCodecTest, HeaderLayout) {
  ToyCodec codec;
  const auto bytes = codec.Encode(ImageTensor(3, 5, 9, 128.0f), 2.0);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "TOYC");
  EXPECT_EQ(bytes[4], 9);
  EXPECT_EQ(bytes[8], 5);
  const std::vector<uint8_t> two = {0x00, 0x00, 0x00, 0x40};
  EXPECT_EQ(std::vector<uint8_t>(bytes.begin() + 12, bytes.begin() + 16), two);
  // A flat mid-grey image has no nonzero coefficients: one end-of-block byte
  // per block, 2 blocks per channel.
  EXPECT_EQ(bytes.size(), 16u + 3 * 2);
}

TEST(ToyCodecTest, RoundTripWithinAnalyticBound) {
  ToyCodec codec;
  std::mt19937_64 rng(1);
  for (double step : {1.0, 4.0, 13.5, 40.0}) {
    for (int i = 0; i < 3; ++i) {
      ImageTensor img = testing::RandomImage(3, 5 + 11 * i, 23 - 4 * i, rng, 0, 255);
      for (float& v : img.data()) v = std::round(v);
      const ImageTensor out = codec.Decode(codec.Encode(img, step));
      ASSERT_TRUE(out.SameShape(img));
      EXPECT_LE(testing::MaxAbsDiff(out, img), ErrorBound(step)) << step;
      for (float v : out.data()) {
        EXPECT_EQ(v, std::round(v));
        EXPECT_GE(v, 0.0f);
        EXPECT_LE(v, 255.0f);
      }
    }
  }
}

TEST(ToyCodecTest, FineStepIsNearLossless) {
  ToyCodec codec;
  const ImageTensor img = SyntheticTexturedImage(32, 32, 2);
  EXPECT_EQ(codec.Decode(codec.Encode(img, 0.25)), img);
}

TEST(ToyCodecTest, PayloadSizeMonotoneInStep) {
  ToyCodec codec;
  const auto corpus = SyntheticCorpus(6, 40, 48, 3);
  for (const ImageTensor& img : corpus) {
    size_t prev = codec.Encode(img, 1.0).size();
    for (double step = 1.5; step <= 120; step *= 1.3) {
      const size_t cur = codec.Encode(img, step).size();
      EXPECT_LE(cur, prev) << step;
      prev = cur;
    }
  }
}

TEST(ToyCodecTest, Deterministic) {
  ToyCodec codec;
  const ImageTensor img = SyntheticTexturedImage(17, 19, 4);
  EXPECT_EQ(codec.Encode(img, 9), codec.Encode(img, 9));
}

TEST(ToyCodecTest, Errors) {
  ToyCodec codec;
  auto expect_codec_error = [&](auto fn) {
    try {
      fn();
      ADD_FAILURE() << "expected a codec error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kCodec) << e.what();
    }
  };
  expect_codec_error([&] { codec.Encode(ImageTensor(1, 8, 8), 4); });
  expect_codec_error([&] { codec.Encode(ImageTensor(3, 8, 8), 0); });
  expect_codec_error([&] { codec.Decode(std::vector<uint8_t>{}); });
  auto good = codec.Encode(SyntheticTexturedImage(8, 8, 5), 4);
  auto truncated = good;
  truncated.pop_back();
  expect_codec_error([&] { codec.Decode(truncated); });
  auto trailing = good;
  trailing.push_back(0);
  expect_codec_error([&] { codec.Decode(trailing); });
  auto magic = good;
  magic[0] = 'X';
  expect_codec_error([&] { codec.Decode(magic); });
}

}  // namespace
}  // namespace mvgl
