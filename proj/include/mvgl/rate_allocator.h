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

#ifndef MVGL_RATE_ALLOCATOR_H_
#define MVGL_RATE_ALLOCATOR_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mvgl {

// One encoding choice for one image.
struct RateOption {
  uint64_t size = 0;        // bytes
  double distortion = 0.0;  // sum of squared error
  bool operator==(const RateOption&) const = default;
};

// Pick exactly one option per image, minimizing total distortion subject to
// total size <= limit (a multiple-choice knapsack).
struct AllocationInstance {
  std::vector<std::vector<RateOption>> images;
  uint64_t limit = 0;

  size_t image_count() const { return images.size(); }

  // Rectangular instance from N x M matrices (row i = image i).
  static AllocationInstance FromMatrices(
      const std::vector<std::vector<uint64_t>>& sizes,
      const std::vector<std::vector<double>>& distortions, uint64_t limit);

  // Throws Error(kInvalidArgument) for empty images/options or negative or
  // non-finite distortions.
  void Validate() const;

  // Sum over images of the smallest option size.
  uint64_t MinTotalSize() const;
  bool operator==(const AllocationInstance&) const = default;
};

// choice[i] is the option index used for image i.
struct Allocation {
  std::vector<size_t> choice;
  bool operator==(const Allocation&) const = default;
};

// Both throw Error(kInvalidArgument) if the allocation does not fit.
double Objective(const AllocationInstance& inst, const Allocation& alloc);
uint64_t TotalSize(const AllocationInstance& inst, const Allocation& alloc);
bool Feasible(const AllocationInstance& inst, const Allocation& alloc);

// Exact optimum; among optimal allocations returns the lexicographically
// smallest choice vector. Throws InfeasibleError when MinTotalSize > limit.
Allocation Solve(const AllocationInstance& inst);

inline constexpr uint64_t kBruteForceCap = 1000000;

// Exhaustive enumeration with Solve's tie-break. Throws
// Error(kInvalidArgument) when the number of allocations exceeds `cap`.
Allocation BruteForce(const AllocationInstance& inst,
                      uint64_t cap = kBruteForceCap);

struct PrunedInstance {
  AllocationInstance reduced;
  // original_index[i][j] = index in the input of reduced option j of image i.
  std::vector<std::vector<size_t>> original_index;

  Allocation ToOriginal(const Allocation& reduced_alloc) const;
};

// Drops options dominated within their image: some sibling has <= size and
// <= distortion with at least one strict.
PrunedInstance DominancePrune(const AllocationInstance& inst);

// Text interchange: a header line "N M limit", then N lines of M
// "size:distortion" pairs. Blank lines and '#' comments are ignored.
AllocationInstance ParseInstance(std::string_view text);
std::string FormatInstance(const AllocationInstance& inst);

}  // namespace mvgl

#endif  // MVGL_RATE_ALLOCATOR_H_
