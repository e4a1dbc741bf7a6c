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

#include "mvgl/tiled_inference.h"

#include <algorithm>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "mvgl/errors.h"

namespace mvgl {

size_t EffectiveKernelSize(const NetworkConfig& config) {
  return (config.kernel - 1) * ConvLayerCount(config) + 1;
}

size_t TilePad(size_t effective_kernel) { return (effective_kernel + 2) / 2; }

size_t TilePlan::MaxSourcePixels() const {
  size_t best = 0;
  for (const Tile& t : tiles) best = std::max(best, t.source.area());
  return best;
}

namespace {

struct Segment {
  size_t begin;
  size_t size;
};

// `parts` near-equal segments of [0, n); the first n % parts are one longer.
std::vector<Segment> SplitAxis(size_t n, size_t parts) {
  parts = std::clamp<size_t>(parts, 1, n);
  const size_t base = n / parts;
  const size_t extra = n % parts;
  std::vector<Segment> out;
  size_t pos = 0;
  for (size_t i = 0; i < parts; ++i) {
    const size_t len = base + (i < extra ? 1 : 0);
    out.push_back({pos, len});
    pos += len;
  }
  return out;
}

size_t MaxSourceExtent(size_t n, size_t parts, size_t pad) {
  size_t best = 0;
  for (const Segment& s : SplitAxis(n, parts)) {
    const size_t lo = s.begin >= pad ? s.begin - pad : 0;
    const size_t hi = std::min(n, s.begin + s.size + pad);
    best = std::max(best, hi - lo);
  }
  return best;
}

}  // namespace

TilePlan PlanTiles(size_t height, size_t width, Grid grid,
                   size_t effective_kernel) {
  if (height < 1 || width < 1) {
    throw Error(ErrorCode::kShape, "plan_tiles: empty image");
  }
  if (grid.rows < 1 || grid.cols < 1) {
    throw Error(ErrorCode::kInvalidArgument, "plan_tiles: grid must be >= 1x1");
  }
  TilePlan plan;
  plan.height = height;
  plan.width = width;
  plan.pad = TilePad(effective_kernel);
  const auto rows = SplitAxis(height, grid.rows);
  const auto cols = SplitAxis(width, grid.cols);
  plan.grid = {rows.size(), cols.size()};
  const size_t pad = plan.pad;
  for (const Segment& r : rows) {
    for (const Segment& c : cols) {
      Tile t;
      t.destination = {r.begin, c.begin, r.size, c.size};
      t.pad_top = std::min(pad, r.begin);
      t.pad_left = std::min(pad, c.begin);
      t.pad_bottom = std::min(pad, height - (r.begin + r.size));
      t.pad_right = std::min(pad, width - (c.begin + c.size));
      t.source = {r.begin - t.pad_top, c.begin - t.pad_left,
                  r.size + t.pad_top + t.pad_bottom,
                  c.size + t.pad_left + t.pad_right};
      plan.tiles.push_back(t);
    }
  }
  return plan;
}

namespace {

void RunTile(const ImageTensor& img, const ModelWeights& m, const Tile& tile,
             ImageTensor* out) {
  const ImageTensor patch = NetworkForward(Crop(img, tile.source), m);
  const Rect keep{tile.pad_top, tile.pad_left, tile.destination.height,
                  tile.destination.width};
  Paste(Crop(patch, keep), tile.destination.y0, tile.destination.x0, out);
}

}  // namespace

ImageTensor TiledForward(const ImageTensor& img, const ModelWeights& m,
                         const TiledOptions& options) {
  if (img.channels() != 3) {
    throw Error(ErrorCode::kShape, "tiled_forward expects a 3-channel image");
  }
  const TilePlan plan = PlanTiles(img.height(), img.width(), options.grid,
                                  EffectiveKernelSize(m.config));
  ImageTensor out(img.channels(), img.height(), img.width());
  if (options.observer) {
    for (const Tile& t : plan.tiles) options.observer(t, t.source.area());
  }
  if (!options.parallel || plan.tiles.size() == 1) {
    for (const Tile& t : plan.tiles) RunTile(img, m, t, &out);
    return out;
  }
  // Destinations are disjoint, so tiles write without synchronization.
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (const Tile& t : plan.tiles) {
    pool.emplace_back([&, t] {
      try {
        RunTile(img, m, t, &out);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

ImageTensor TiledForward(const ImageTensor& img, const ModelWeights& m,
                         Grid grid) {
  TiledOptions options;
  options.grid = grid;
  return TiledForward(img, m, options);
}

size_t EstimateTileBytes(const NetworkConfig& config, size_t tile_pixels) {
  // Live planes during a residual block: input/normalized copies (6),
  // output (3), and five n-channel activations.
  const size_t planes = 5 * config.feature_maps + 9;
  return tile_pixels * planes * sizeof(float);
}

Grid GridForMemoryBudget(size_t height, size_t width,
                         const NetworkConfig& config, size_t budget_bytes) {
  const size_t pad = TilePad(EffectiveKernelSize(config));
  auto peak = [&](size_t r, size_t c) {
    return EstimateTileBytes(config, MaxSourceExtent(height, r, pad) *
                                         MaxSourceExtent(width, c, pad));
  };
  if (peak(height, width) > budget_bytes) {
    throw Error(ErrorCode::kConfig,
                "memory budget too small for any tiling of this image");
  }
  for (size_t count = 1; count <= height * width; ++count) {
    Grid best{0, 0};
    size_t best_peak = std::numeric_limits<size_t>::max();
    for (size_t r = 1; r <= count && r <= height; ++r) {
      if (count % r != 0) continue;
      const size_t c = count / r;
      if (c > width) continue;
      const size_t p = peak(r, c);
      if (p <= budget_bytes && p < best_peak) {
        best = {r, c};
        best_peak = p;
      }
    }
    if (best.rows != 0) return best;
  }
  return {height, width};
}

}  // namespace mvgl
