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

#include "afkit/tiling.hpp"

#include <algorithm>
#include <string>

#include "afkit/error.hpp"

namespace afkit {

namespace {

std::vector<int> plan_axis(int dim, int window, int overlap) {
  std::vector<int> origins{0};
  if (dim <= window) return origins;
  const int stride = window - overlap;
  int o = 0;
  while (o + window < dim) {
    o = std::min(o + stride, dim - window);
    origins.push_back(o);
  }
  return origins;
}

// Unnormalized 1-D feather weight of tile i along one axis.
std::vector<double> axis_ramp(const std::vector<int>& origins, int size, std::size_t i) {
  std::vector<double> w(size, 1.0);
  const int start = origins[i];
  if (i > 0) {
    const int band = origins[i - 1] + size - start;
    for (int p = 0; p < std::min(band, size); ++p) {
      w[p] = std::min(w[p], (p + 0.5) / band);
    }
  }
  if (i + 1 < origins.size()) {
    const int band = start + size - origins[i + 1];
    for (int p = std::max(0, size - band); p < size; ++p) {
      w[p] = std::min(w[p], (size - p - 0.5) / band);
    }
  }
  return w;
}

// Sum of ramps of every tile covering each position along the axis.
std::vector<double> axis_total(const std::vector<int>& origins, int size, int dim) {
  std::vector<double> total(dim, 0.0);
  for (std::size_t i = 0; i < origins.size(); ++i) {
    const auto r = axis_ramp(origins, size, i);
    for (int p = 0; p < size; ++p) total[origins[i] + p] += r[p];
  }
  return total;
}

}  // namespace

TileRect TileGrid::rect(std::size_t index) const {
  const std::size_t nx = x_origins.size();
  if (index >= size()) throw Error(ErrorCode::kInvalidArgument, "tile index out of range");
  return {x_origins[index % nx], y_origins[index / nx], tile_width(), tile_height()};
}

std::vector<TileRect> TileGrid::rects() const {
  std::vector<TileRect> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(rect(i));
  return out;
}

TileGrid plan_tiles(int width, int height, int window, int overlap) {
  if (width < 1 || height < 1) throw Error(ErrorCode::kInvalidArgument, "image must be >= 1x1");
  if (overlap < 0 || window <= overlap) {
    throw Error(ErrorCode::kInvalidArgument,
                "tiling needs window > overlap >= 0, got window " + std::to_string(window) +
                    " overlap " + std::to_string(overlap));
  }
  TileGrid g;
  g.width = width;
  g.height = height;
  g.window = window;
  g.overlap = overlap;
  g.x_origins = plan_axis(width, window, overlap);
  g.y_origins = plan_axis(height, window, overlap);
  return g;
}

std::vector<ImageBuffer> split(const ImageBuffer& img, const TileGrid& grid) {
  if (img.width() != grid.width || img.height() != grid.height) {
    throw Error(ErrorCode::kDimensionMismatch, "image does not match tile grid");
  }
  std::vector<ImageBuffer> tiles;
  tiles.reserve(grid.size());
  for (const TileRect& r : grid.rects()) tiles.push_back(crop(img, r.x, r.y, r.width, r.height));
  return tiles;
}

Plane tile_weights(const TileGrid& grid, std::size_t index) {
  const TileRect r = grid.rect(index);
  const std::size_t nx = grid.x_origins.size();
  const auto wx = axis_ramp(grid.x_origins, r.width, index % nx);
  const auto wy = axis_ramp(grid.y_origins, r.height, index / nx);
  // The 2-D weight is separable, so is its per-pixel sum over the grid.
  const auto tx = axis_total(grid.x_origins, r.width, grid.width);
  const auto ty = axis_total(grid.y_origins, r.height, grid.height);
  Plane w(r.width, r.height);
  for (int y = 0; y < r.height; ++y) {
    const double fy = wy[y] / ty[r.y + y];
    for (int x = 0; x < r.width; ++x) w.at(x, y) = fy * (wx[x] / tx[r.x + x]);
  }
  return w;
}

ImageBuffer merge(std::span<const ImageBuffer> tiles, const TileGrid& grid) {
  if (tiles.size() != grid.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(grid.size()) + " tiles, got " +
                    std::to_string(tiles.size()));
  }
  const int channels = tiles.front().channels();
  const SampleType type = tiles.front().type();
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const TileRect r = grid.rect(i);
    if (tiles[i].width() != r.width || tiles[i].height() != r.height ||
        tiles[i].channels() != channels || tiles[i].type() != type) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "tile " + std::to_string(i) + " does not match the grid geometry");
    }
  }

  // out = first + sum_i w_i * (tile_i - first), with `first` the value of the
  // first tile covering the pixel. Equal to the weighted mean, and exact
  // whenever the covering tiles agree.
  const std::size_t npix = static_cast<std::size_t>(grid.width) * grid.height;
  std::vector<double> base(npix * channels, 0.0);
  std::vector<double> acc(npix * channels, 0.0);
  std::vector<bool> seen(npix, false);
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const TileRect r = grid.rect(i);
    const Plane w = tile_weights(grid, i);
    for (int y = 0; y < r.height; ++y) {
      for (int x = 0; x < r.width; ++x) {
        const std::size_t p = static_cast<std::size_t>(r.y + y) * grid.width + (r.x + x);
        const double wt = w.at(x, y);
        for (int c = 0; c < channels; ++c) {
          const double v = tiles[i].at(x, y, c);
          if (!seen[p]) {
            base[p * channels + c] = v;
          } else {
            acc[p * channels + c] += wt * (v - base[p * channels + c]);
          }
        }
        seen[p] = true;
      }
    }
  }
  std::vector<double> out(npix * channels);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = base[i] + acc[i];
  ImageBuffer merged = ImageBuffer::from_float(grid.width, grid.height, channels, std::move(out));
  return type == SampleType::kU8 ? quantize_u8(merged) : merged;
}

ImageBuffer pad_reflect(const ImageBuffer& img, int min_width, int min_height) {
  const int w = std::max(img.width(), min_width);
  const int h = std::max(img.height(), min_height);
  if (w == img.width() && h == img.height()) return img;
  const int c = img.channels();
  ImageBuffer out = ImageBuffer::zeros(w, h, c, img.type());
  auto fill = [&](auto src, auto dst) {
    for (int y = 0; y < h; ++y) {
      const int sy = border_index(y, img.height(), Border::kReflect101);
      for (int x = 0; x < w; ++x) {
        const int sx = border_index(x, img.width(), Border::kReflect101);
        for (int k = 0; k < c; ++k) {
          dst[(static_cast<std::size_t>(y) * w + x) * c + k] =
              src[(static_cast<std::size_t>(sy) * img.width() + sx) * c + k];
        }
      }
    }
  };
  if (img.is_u8()) {
    fill(img.u8(), out.u8());
  } else {
    fill(img.f64(), out.f64());
  }
  return out;
}

}  // namespace afkit
