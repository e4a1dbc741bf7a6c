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

#include "mvgl/rate_allocator.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "mvgl/errors.h"

namespace mvgl {
namespace {

AllocationInstance TieInstance(uint64_t limit = 9) {
  return AllocationInstance::FromMatrices({{3, 5}, {4, 6}}, {{10, 4}, {8, 2}},
                                          limit);
}

// Random instance with a feasible budget between the smallest and largest
// achievable total sizes.
AllocationInstance RandomInstance(std::mt19937_64& rng, size_t max_n,
                                  size_t max_m, bool integral) {
  std::uniform_int_distribution<size_t> n_dist(1, max_n), m_dist(1, max_m);
  std::uniform_int_distribution<uint64_t> size(1, 50);
  std::uniform_real_distribution<double> dist(0, 1000);
  AllocationInstance inst;
  const size_t n = n_dist(rng);
  uint64_t lo = 0, hi = 0;
  for (size_t i = 0; i < n; ++i) {
    const size_t m = m_dist(rng);
    std::vector<RateOption> opts;
    uint64_t mn = std::numeric_limits<uint64_t>::max(), mx = 0;
    for (size_t j = 0; j < m; ++j) {
      const double d = integral ? std::floor(dist(rng) / 50) : dist(rng);
      opts.push_back({size(rng), d});
      mn = std::min(mn, opts.back().size);
      mx = std::max(mx, opts.back().size);
    }
    lo += mn;
    hi += mx;
    inst.images.push_back(opts);
  }
  inst.limit = std::uniform_int_distribution<uint64_t>(lo, hi)(rng);
  return inst;
}

TEST(ObjectiveTest, Examples) {
  auto zero = AllocationInstance::FromMatrices({{1, 2}}, {{0, 0}}, 5);
  EXPECT_EQ(Objective(zero, Allocation{{1}}), 0.0);
  auto one = AllocationInstance::FromMatrices({{1, 2}}, {{10, 4}}, 5);
  EXPECT_EQ(Objective(one, Allocation{{1}}), 4.0);
  EXPECT_THROW(Objective(one, Allocation{{2}}), Error);
  EXPECT_THROW(Objective(one, Allocation{{0, 0}}), Error);
}

TEST(ObjectiveTest, MatchesFlatLoop) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const AllocationInstance inst = RandomInstance(rng, 8, 4, false);
    Allocation a;
    double f = 0;
    uint64_t b = 0;
    for (const auto& opts : inst.images) {
      a.choice.push_back(rng() % opts.size());
      f += opts[a.choice.back()].distortion;
      b += opts[a.choice.back()].size;
    }
    EXPECT_EQ(Objective(inst, a), f);
    EXPECT_EQ(TotalSize(inst, a), b);
    EXPECT_EQ(Feasible(inst, a), b <= inst.limit);
  }
}

TEST(FeasibleTest, Examples) {
  EXPECT_FALSE(Feasible(AllocationInstance::FromMatrices({{2}}, {{0}}, 0),
                        Allocation{{0}}));
  EXPECT_EQ(TotalSize(TieInstance(), Allocation{{0, 1}}), 9u);
  EXPECT_TRUE(Feasible(TieInstance(9), Allocation{{0, 1}}));
  EXPECT_FALSE(Feasible(TieInstance(8), Allocation{{0, 1}}));
}

TEST(SolveTest, SingleOptionIsForced) {
  const auto inst = AllocationInstance::FromMatrices({{3}, {4}}, {{1}, {2}}, 7);
  EXPECT_EQ(Solve(inst), (Allocation{{0, 0}}));
  auto tight = inst;
  tight.limit = 6;
  EXPECT_THROW(Solve(tight), InfeasibleError);
}

TEST(SolveTest, TieBreaksLexicographically) {
  const auto inst = TieInstance();
  EXPECT_EQ(Objective(inst, Solve(inst)), 12.0);
  EXPECT_EQ(Solve(inst), (Allocation{{0, 1}}));
  EXPECT_EQ(BruteForce(inst), (Allocation{{0, 1}}));
}

TEST(SolveTest, InfeasibleCarriesMinimumSize) {
  const auto inst = TieInstance(6);
  try {
    Solve(inst);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
    EXPECT_EQ(e.min_total_size(), 7u);
    EXPECT_EQ(e.limit(), 6u);
  }
  EXPECT_THROW(BruteForce(inst), InfeasibleError);
}

TEST(SolveTest, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const bool integral = t % 2 == 0;
    const AllocationInstance inst = RandomInstance(rng, 8, 4, integral);
    const Allocation s = Solve(inst);
    const Allocation b = BruteForce(inst);
    ASSERT_TRUE(Feasible(inst, s));
    EXPECT_EQ(Objective(inst, s), Objective(inst, b)) << FormatInstance(inst);
    EXPECT_EQ(s, b) << FormatInstance(inst);
  }
}

// Dynamic program over total size, independent of the search.
double DpOptimum(const AllocationInstance& inst) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(inst.limit + 1, inf);
  best[0] = 0;
  for (const auto& opts : inst.images) {
    std::vector<double> next(inst.limit + 1, inf);
    for (uint64_t s = 0; s <= inst.limit; ++s) {
      if (best[s] == inf) continue;
      for (const RateOption& o : opts) {
        if (s + o.size <= inst.limit) {
          next[s + o.size] = std::min(next[s + o.size], best[s] + o.distortion);
        }
      }
    }
    best.swap(next);
  }
  double out = inf;
  for (double v : best) out = std::min(out, v);
  return out;
}

TEST(SolveTest, MatchesDynamicProgramAtMediumScale) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    AllocationInstance inst;
    std::uniform_int_distribution<uint64_t> size(5, 60);
    std::uniform_real_distribution<double> dist(0, 1e6);
    uint64_t lo = 0, hi = 0;
    for (int i = 0; i < 40; ++i) {
      std::vector<RateOption> opts;
      for (int j = 0; j < 5; ++j) opts.push_back({size(rng), dist(rng)});
      uint64_t mn = 1000, mx = 0;
      for (const auto& o : opts) {
        mn = std::min(mn, o.size);
        mx = std::max(mx, o.size);
      }
      lo += mn;
      hi += mx;
      inst.images.push_back(opts);
    }
    inst.limit = lo + (hi - lo) * (t + 1) / 22;
    const Allocation a = Solve(inst);
    ASSERT_TRUE(Feasible(inst, a));
    const double dp = DpOptimum(inst);
    EXPECT_NEAR(Objective(inst, a), dp, 1e-9 * dp);
  }
}

TEST(SolveTest, MonotoneInLimit) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    AllocationInstance inst = RandomInstance(rng, 8, 4, false);
    double prev = Objective(inst, Solve(inst));
    for (int k = 0; k < 5; ++k) {
      inst.limit += 7;
      const double cur = Objective(inst, Solve(inst));
      EXPECT_LE(cur, prev);
      prev = cur;
    }
  }
}

TEST(SolveTest, ChoiceInvariantUnderDistortionScaling) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const AllocationInstance inst = RandomInstance(rng, 8, 4, true);
    AllocationInstance scaled = inst;
    for (auto& opts : scaled.images) {
      for (auto& o : opts) o.distortion *= 4.0;
    }
    EXPECT_EQ(Solve(inst), Solve(scaled));
  }
}

TEST(BruteForceTest, Examples) {
  const auto inst = AllocationInstance::FromMatrices({{1, 1, 1}}, {{5, 3, 9}}, 1);
  EXPECT_EQ(BruteForce(inst), (Allocation{{1}}));
  AllocationInstance big;
  big.images.assign(11, std::vector<RateOption>(4, RateOption{1, 1}));
  big.limit = 100;
  try {
    BruteForce(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_EQ(Solve(big).choice.size(), 11u);
}

TEST(DominancePruneTest, Examples) {
  const auto inst = AllocationInstance::FromMatrices(
      {{3, 5, 4}, {1, 2, 3}}, {{10, 4, 12}, {9, 5, 1}}, 20);
  const PrunedInstance p = DominancePrune(inst);
  ASSERT_EQ(p.reduced.images[0].size(), 2u);
  EXPECT_EQ(p.original_index[0], (std::vector<size_t>{0, 1}));
  EXPECT_EQ(p.reduced.images[1].size(), 3u);
  EXPECT_EQ(p.ToOriginal(Allocation{{1, 2}}), (Allocation{{1, 2}}));
}

TEST(DominancePruneTest, PreservesOptimum) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const AllocationInstance inst = RandomInstance(rng, 8, 4, t % 2 == 0);
    const PrunedInstance p = DominancePrune(inst);
    const Allocation a = p.ToOriginal(Solve(p.reduced));
    EXPECT_EQ(Objective(inst, a), Objective(inst, BruteForce(inst)));
  }
}

TEST(InstanceTextTest, RoundTrip) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    AllocationInstance inst = RandomInstance(rng, 6, 3, false);
    const size_t m = inst.images[0].size();
    for (auto& opts : inst.images) opts.resize(m, opts[0]);
    EXPECT_EQ(ParseInstance(FormatInstance(inst)), inst);
  }
}

TEST(InstanceTextTest, ParsesCommentsAndRejectsGarbage) {
  const auto inst = ParseInstance(
      "# two images\n2 2 9\n\n3:10 5:4  # first\n4:8 6:2\n");
  EXPECT_EQ(inst, TieInstance());
  for (const char* bad : {"", "2 2 9\n3:10 5:4\n", "1 2 9\n3:10 x:4\n",
                          "1 1 5\n3:-1\n", "1 1 5\n3:1 4:2\n"}) {
    try {
      ParseInstance(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kFormat) << bad;
    }
  }
}

TEST(InstanceTest, Validate) {
  AllocationInstance inst;
  EXPECT_THROW(inst.Validate(), Error);
  inst.images = {{}};
  EXPECT_THROW(inst.Validate(), Error);
  inst.images = {{RateOption{1, -1.0}}};
  EXPECT_THROW(inst.Validate(), Error);
  inst.images = {{RateOption{1, 2.0}}};
  EXPECT_NO_THROW(inst.Validate());
  EXPECT_EQ(TieInstance().MinTotalSize(), 7u);
}

}  // namespace
}  // namespace mvgl
