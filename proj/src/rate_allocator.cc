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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mvgl/errors.h"

namespace mvgl {

AllocationInstance AllocationInstance::FromMatrices(
    const std::vector<std::vector<uint64_t>>& sizes,
    const std::vector<std::vector<double>>& distortions, uint64_t limit) {
  if (sizes.size() != distortions.size()) {
    throw Error(ErrorCode::kInvalidArgument, "size/distortion row mismatch");
  }
  AllocationInstance inst;
  inst.limit = limit;
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i].size() != distortions[i].size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "size/distortion column mismatch in row " + std::to_string(i));
    }
    std::vector<RateOption> row;
    for (size_t j = 0; j < sizes[i].size(); ++j) {
      row.push_back({sizes[i][j], distortions[i][j]});
    }
    inst.images.push_back(std::move(row));
  }
  return inst;
}

void AllocationInstance::Validate() const {
  if (images.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "allocation: no images");
  }
  for (size_t i = 0; i < images.size(); ++i) {
    if (images[i].empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "allocation: image " + std::to_string(i) + " has no options");
    }
    for (const RateOption& o : images[i]) {
      if (!std::isfinite(o.distortion) || o.distortion < 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "allocation: distortion must be finite and >= 0");
      }
    }
  }
}

uint64_t AllocationInstance::MinTotalSize() const {
  uint64_t total = 0;
  for (const auto& opts : images) {
    uint64_t best = std::numeric_limits<uint64_t>::max();
    for (const RateOption& o : opts) best = std::min(best, o.size);
    total += best;
  }
  return total;
}

namespace {

void CheckAllocation(const AllocationInstance& inst, const Allocation& alloc) {
  if (alloc.choice.size() != inst.images.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "allocation length does not match image count");
  }
  for (size_t i = 0; i < alloc.choice.size(); ++i) {
    if (alloc.choice[i] >= inst.images[i].size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "choice index out of range for image " + std::to_string(i));
    }
  }
}

}  // namespace

double Objective(const AllocationInstance& inst, const Allocation& alloc) {
  CheckAllocation(inst, alloc);
  double total = 0;
  for (size_t i = 0; i < alloc.choice.size(); ++i) {
    total += inst.images[i][alloc.choice[i]].distortion;
  }
  return total;
}

uint64_t TotalSize(const AllocationInstance& inst, const Allocation& alloc) {
  CheckAllocation(inst, alloc);
  uint64_t total = 0;
  for (size_t i = 0; i < alloc.choice.size(); ++i) {
    total += inst.images[i][alloc.choice[i]].size;
  }
  return total;
}

bool Feasible(const AllocationInstance& inst, const Allocation& alloc) {
  return TotalSize(inst, alloc) <= inst.limit;
}

namespace {

// An upper-left-to-lower-right edge of one image's lower convex hull in the
// (size, distortion) plane.
struct HullSegment {
  size_t image;
  size_t to;  // hull vertex index reached by taking this segment
  double dsize;
  double gain;  // distortion removed
};

class BranchAndBound {
 public:
  explicit BranchAndBound(const AllocationInstance& inst) : inst_(inst) {
    const size_t n = inst.images.size();
    kept_.resize(n);
    hull_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      kept_[i] = TieSafeSurvivors(inst.images[i]);
      hull_[i] = LowerHull(inst.images[i], kept_[i]);
    }
    base_dist_.assign(n + 1, 0.0);
    base_size_.assign(n + 1, 0);
    for (size_t i = n; i-- > 0;) {
      const RateOption& start = inst.images[i][hull_[i].front()];
      base_dist_[i] = base_dist_[i + 1] + start.distortion;
      base_size_[i] = base_size_[i + 1] + start.size;
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t v = 1; v < hull_[i].size(); ++v) {
        const RateOption& a = inst.images[i][hull_[i][v - 1]];
        const RateOption& b = inst.images[i][hull_[i][v]];
        segments_.push_back(
            {i, v, double(b.size - a.size), a.distortion - b.distortion});
      }
    }
    // Best distortion reduction per byte first; within an image slopes are
    // already decreasing along the hull, so this order respects it.
    std::stable_sort(segments_.begin(), segments_.end(),
                     [](const HullSegment& a, const HullSegment& b) {
                       return a.gain * b.dsize > b.gain * a.dsize;
                     });
  }

  Allocation Run() {
    const size_t n = inst_.images.size();
    SeedIncumbent();
    current_.assign(n, 0);
    Search(0, 0, 0.0);
    return {best_choice_};
  }

 private:
  // Options that can appear in the lexicographically smallest optimum.
  // Option j is dropped if a sibling j2 has size <= and distortion <, or has
  // size <= and equal distortion with j2 < j (swapping then keeps the
  // objective and makes the choice vector smaller).
  static std::vector<size_t> TieSafeSurvivors(
      const std::vector<RateOption>& opts) {
    std::vector<size_t> out;
    for (size_t j = 0; j < opts.size(); ++j) {
      bool dropped = false;
      for (size_t j2 = 0; j2 < opts.size() && !dropped; ++j2) {
        if (j2 == j || opts[j2].size > opts[j].size) continue;
        if (opts[j2].distortion < opts[j].distortion) dropped = true;
        if (opts[j2].distortion == opts[j].distortion && j2 < j) dropped = true;
      }
      if (!dropped) out.push_back(j);
    }
    return out;
  }

  // Vertices (option indices) of the lower convex hull, by increasing size.
  static std::vector<size_t> LowerHull(const std::vector<RateOption>& opts,
                                       const std::vector<size_t>& kept) {
    std::vector<size_t> pts = kept;
    std::sort(pts.begin(), pts.end(), [&](size_t a, size_t b) {
      if (opts[a].size != opts[b].size) return opts[a].size < opts[b].size;
      if (opts[a].distortion != opts[b].distortion) {
        return opts[a].distortion < opts[b].distortion;
      }
      return a < b;
    });
    std::vector<size_t> frontier;
    for (size_t p : pts) {
      if (frontier.empty() ||
          opts[p].distortion < opts[frontier.back()].distortion) {
        frontier.push_back(p);
      }
    }
    std::vector<size_t> hull;
    for (size_t p : frontier) {
      while (hull.size() >= 2) {
        const RateOption& a = opts[hull[hull.size() - 2]];
        const RateOption& b = opts[hull.back()];
        const RateOption& c = opts[p];
        const double cross =
            double(b.size - a.size) * (c.distortion - a.distortion) -
            (b.distortion - a.distortion) * double(c.size - a.size);
        if (cross > 0) break;
        hull.pop_back();
      }
      hull.push_back(p);
    }
    return hull;
  }

  // LP-relaxation lower bound on the distortion of images [depth, n) within
  // `budget` bytes; +inf if even the smallest options do not fit.
  double Bound(size_t depth, uint64_t budget) const {
    if (base_size_[depth] > budget) {
      return std::numeric_limits<double>::infinity();
    }
    double room = double(budget - base_size_[depth]);
    double value = base_dist_[depth];
    for (const HullSegment& s : segments_) {
      if (s.image < depth) continue;
      if (s.dsize <= room) {
        value -= s.gain;
        room -= s.dsize;
      } else {
        value -= s.gain * (room / s.dsize);
        break;
      }
    }
    return value;
  }

  // Integral greedy along the hull segments: a feasible starting incumbent.
  void SeedIncumbent() {
    const size_t n = inst_.images.size();
    std::vector<size_t> vertex(n, 0);
    std::vector<bool> closed(n, false);
    uint64_t used = base_size_[0];
    for (const HullSegment& s : segments_) {
      if (closed[s.image] || vertex[s.image] + 1 != s.to) continue;
      const uint64_t step = uint64_t(s.dsize);
      if (used + step <= inst_.limit) {
        used += step;
        vertex[s.image] = s.to;
      } else {
        closed[s.image] = true;
      }
    }
    Allocation a;
    for (size_t i = 0; i < n; ++i) a.choice.push_back(hull_[i][vertex[i]]);
    best_choice_ = a.choice;
    best_ = Objective(inst_, a);
  }

  bool Prunable(double bound) const {
    const double tol = 1e-9 * std::max(1.0, std::abs(best_));
    return bound > best_ + tol;
  }

  void Search(size_t depth, uint64_t used, double objective) {
    const size_t n = inst_.images.size();
    if (depth == n) {
      if (objective < best_ ||
          (objective == best_ && current_ < best_choice_)) {
        best_ = objective;
        best_choice_ = current_;
      }
      return;
    }
    if (Prunable(objective + Bound(depth, inst_.limit - used))) return;
    for (size_t j : kept_[depth]) {
      const RateOption& o = inst_.images[depth][j];
      if (o.size > inst_.limit - used) continue;
      if (base_size_[depth + 1] > inst_.limit - used - o.size) continue;
      current_[depth] = j;
      Search(depth + 1, used + o.size, objective + o.distortion);
    }
  }

  const AllocationInstance& inst_;
  std::vector<std::vector<size_t>> kept_;
  std::vector<std::vector<size_t>> hull_;
  std::vector<double> base_dist_;
  std::vector<uint64_t> base_size_;
  std::vector<HullSegment> segments_;
  std::vector<size_t> current_;
  std::vector<size_t> best_choice_;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

Allocation Solve(const AllocationInstance& inst) {
  inst.Validate();
  const uint64_t min_size = inst.MinTotalSize();
  if (min_size > inst.limit) throw InfeasibleError(min_size, inst.limit);
  return BranchAndBound(inst).Run();
}

Allocation BruteForce(const AllocationInstance& inst, uint64_t cap) {
  inst.Validate();
  uint64_t total = 1;
  for (const auto& opts : inst.images) {
    if (total > cap / opts.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "brute force: search space exceeds cap " + std::to_string(cap));
    }
    total *= opts.size();
  }
  const uint64_t min_size = inst.MinTotalSize();
  if (min_size > inst.limit) throw InfeasibleError(min_size, inst.limit);

  const size_t n = inst.images.size();
  Allocation cur{std::vector<size_t>(n, 0)};
  Allocation best;
  double best_obj = std::numeric_limits<double>::infinity();
  // Odometer over choice vectors in lexicographic order.
  while (true) {
    if (TotalSize(inst, cur) <= inst.limit) {
      const double obj = Objective(inst, cur);
      if (obj < best_obj) {
        best_obj = obj;
        best = cur;
      }
    }
    size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++cur.choice[pos] < inst.images[pos].size()) break;
      cur.choice[pos] = 0;
      if (pos == 0) return best;
    }
  }
}

Allocation PrunedInstance::ToOriginal(const Allocation& reduced_alloc) const {
  if (reduced_alloc.choice.size() != original_index.size()) {
    throw Error(ErrorCode::kInvalidArgument, "allocation length mismatch");
  }
  Allocation out;
  for (size_t i = 0; i < reduced_alloc.choice.size(); ++i) {
    out.choice.push_back(original_index[i].at(reduced_alloc.choice[i]));
  }
  return out;
}

PrunedInstance DominancePrune(const AllocationInstance& inst) {
  inst.Validate();
  PrunedInstance out;
  out.reduced.limit = inst.limit;
  for (const auto& opts : inst.images) {
    std::vector<RateOption> row;
    std::vector<size_t> index;
    for (size_t j = 0; j < opts.size(); ++j) {
      bool dominated = false;
      for (size_t j2 = 0; j2 < opts.size() && !dominated; ++j2) {
        const RateOption& a = opts[j2];
        const RateOption& b = opts[j];
        dominated = j2 != j && a.size <= b.size && a.distortion <= b.distortion &&
                    (a.size < b.size || a.distortion < b.distortion);
      }
      if (!dominated) {
        row.push_back(opts[j]);
        index.push_back(j);
      }
    }
    out.reduced.images.push_back(std::move(row));
    out.original_index.push_back(std::move(index));
  }
  return out;
}

AllocationInstance ParseInstance(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      const size_t hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.push_back(line);
    }
  }
  if (lines.empty()) throw Error(ErrorCode::kFormat, "instance: missing header");
  std::istringstream header(lines[0]);
  long long n = 0, m = 0;
  unsigned long long limit = 0;
  std::string extra;
  if (!(header >> n >> m >> limit) || (header >> extra) || n < 1 || m < 1) {
    throw Error(ErrorCode::kFormat, "instance: header must be 'N M limit'");
  }
  if (lines.size() != size_t(n) + 1) {
    throw Error(ErrorCode::kFormat, "instance: expected " + std::to_string(n) +
                                        " option lines, found " +
                                        std::to_string(lines.size() - 1));
  }
  AllocationInstance inst;
  inst.limit = limit;
  for (long long i = 0; i < n; ++i) {
    std::istringstream row(lines[size_t(i) + 1]);
    std::vector<RateOption> opts;
    std::string token;
    while (row >> token) {
      const size_t colon = token.find(':');
      RateOption o;
      try {
        if (colon == std::string::npos || token[0] == '-') throw 0;
        size_t used = 0;
        o.size = std::stoull(token.substr(0, colon), &used);
        if (used != colon) throw 0;
        const std::string dist = token.substr(colon + 1);
        o.distortion = std::stod(dist, &used);
        if (used != dist.size()) throw 0;
      } catch (...) {
        throw Error(ErrorCode::kFormat,
                    "instance: bad option '" + token + "' on line " +
                        std::to_string(i + 2));
      }
      opts.push_back(o);
    }
    if (opts.size() != size_t(m)) {
      throw Error(ErrorCode::kFormat, "instance: line " + std::to_string(i + 2) +
                                          " must have " + std::to_string(m) +
                                          " options");
    }
    inst.images.push_back(std::move(opts));
  }
  try {
    inst.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormat, std::string("instance: ") + e.what());
  }
  return inst;
}

std::string FormatInstance(const AllocationInstance& inst) {
  inst.Validate();
  const size_t m = inst.images.front().size();
  for (const auto& opts : inst.images) {
    if (opts.size() != m) {
      throw Error(ErrorCode::kInvalidArgument,
                  "instance file needs the same option count for every image");
    }
  }
  std::ostringstream out;
  out.precision(17);
  out << inst.images.size() << ' ' << m << ' ' << inst.limit << '\n';
  for (const auto& opts : inst.images) {
    for (size_t j = 0; j < opts.size(); ++j) {
      if (j) out << ' ';
      out << opts[j].size << ':' << opts[j].distortion;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mvgl
