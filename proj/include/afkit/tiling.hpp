// Copyright 2026 The afkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "afkit/image.hpp"
#include "afkit/plane.hpp"

namespace afkit {

struct TileRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool operator==(const TileRect&) const = default;
};

/// Overlapping window layout. Origins advance by window - overlap and the
/// last one is clamped to dim - window; an axis shorter than the window gets
/// a single tile spanning it.
struct TileGrid {
  int width = 0;
  int height = 0;
  int window = 0;
  int overlap = 0;
  std::vector<int> x_origins;
  std::vector<int> y_origins;

  int tile_width() const noexcept { return std::min(window, width); }
  int tile_height() const noexcept { return std::min(window, height); }
  std::size_t size() const noexcept { return x_origins.size() * y_origins.size(); }

  /// Row-major: index = yi * x_origins.size() + xi.
  TileRect rect(std::size_t index) const;
  std::vector<TileRect> rects() const;
};

/// Throws kInvalidArgument unless window > overlap >= 0 and w, h >= 1.
TileGrid plan_tiles(int width, int height, int window, int overlap);

std::vector<ImageBuffer> split(const ImageBuffer& img, const TileGrid& grid);

/// Blend weights of one tile (tile-sized plane). Each is a product of 1-D
/// linear ramps across the actual overlap with the neighbouring tiles,
/// divided by the per-pixel sum over all tiles, so the weights covering any
/// pixel add up to 1.
Plane tile_weights(const TileGrid& grid, std::size_t index);

/// Feathered merge. Samples in single-coverage regions are copied; where
/// tiles agree the output equals them exactly. 8-bit tiles produce an 8-bit
/// image. Throws kDimensionMismatch on count/geometry/channel mismatch.
ImageBuffer merge(std::span<const ImageBuffer> tiles, const TileGrid& grid);

/// Reflect-101 pads right/bottom so the result is at least min_w x min_h.
ImageBuffer pad_reflect(const ImageBuffer& img, int min_width, int min_height);

}  // namespace afkit
