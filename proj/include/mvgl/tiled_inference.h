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

#ifndef MVGL_TILED_INFERENCE_H_
#define MVGL_TILED_INFERENCE_H_

#include <cstddef>
#include <functional>
#include <vector>

#include "mvgl/image.h"
#include "mvgl/network.h"

namespace mvgl {

// Receptive-field extent of the whole network: E = (k - 1) * l + 1.
size_t EffectiveKernelSize(const NetworkConfig& config);

// Pixels of context added on every side of a tile: ceil((E + 1) / 2).
size_t TilePad(size_t effective_kernel);

struct Grid {
  size_t rows = 2;
  size_t cols = 2;
  bool operator==(const Grid&) const = default;
};

struct Tile {
  Rect destination;  // output pixels this tile owns
  Rect source;       // destination dilated by pad, clipped to the image
  // Context actually available from neighbouring pixels on each side; a
  // shortfall against `pad` means the side touches the image boundary.
  size_t pad_top = 0;
  size_t pad_left = 0;
  size_t pad_bottom = 0;
  size_t pad_right = 0;
};

struct TilePlan {
  size_t height = 0;
  size_t width = 0;
  Grid grid;
  size_t pad = 0;
  std::vector<Tile> tiles;  // row-major over the grid

  size_t MaxSourcePixels() const;
};

// Splits rows and columns with ceil division (leading tiles take the
// remainder); an axis shorter than its grid count uses fewer tiles.
TilePlan PlanTiles(size_t height, size_t width, Grid grid,
                   size_t effective_kernel);

// Called once per tile, before its forward pass, with the tile and the
// number of pixels in its padded source region.
using TileObserver = std::function<void(const Tile&, size_t source_pixels)>;

struct TiledOptions {
  Grid grid;
  // Run tiles on separate threads. Output does not depend on this.
  bool parallel = false;
  TileObserver observer;
};

// Overlap-save inference: each padded tile goes through NetworkForward and
// only its destination rectangle is kept.
ImageTensor TiledForward(const ImageTensor& img, const ModelWeights& m,
                         const TiledOptions& options);
ImageTensor TiledForward(const ImageTensor& img, const ModelWeights& m,
                         Grid grid);

// Estimated peak inference working set, in bytes, for one tile of
// `tile_pixels` pixels.
size_t EstimateTileBytes(const NetworkConfig& config, size_t tile_pixels);

// Smallest grid (by tile count, then by peak estimate) whose largest padded
// tile fits `budget_bytes`. Throws Error(kConfig) if even single-row/column
// tiles do not fit.
Grid GridForMemoryBudget(size_t height, size_t width,
                         const NetworkConfig& config, size_t budget_bytes);

}  // namespace mvgl

#endif  // MVGL_TILED_INFERENCE_H_
