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

#include <cstdint>
#include <span>
#include <vector>

#include "afkit/image.hpp"
#include "afkit/simd.hpp"

namespace afkit {

/// Single-channel double plane, the working format of every filter.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double* row(int y) { return data.data() + static_cast<std::size_t>(y) * width; }
  const double* row(int y) const {
    return data.data() + static_cast<std::size_t>(y) * width;
  }
  double& at(int x, int y) { return row(y)[x]; }
  double at(int x, int y) const { return row(y)[x]; }
};

enum class Border {
  kReflect101,  // gfedcb|abcdefgh|gfedcba
  kSymmetric,   // fedcba|abcdefgh|hgfedcb
  kReplicate,   // aaaaaa|abcdefgh|hhhhhhh
};

/// Maps an out-of-range coordinate into [0, n) for the given border.
int border_index(int i, int n, Border border) noexcept;

std::vector<Plane> split_planes(const ImageBuffer& img);

/// Interleaves planes back into an image; kU8 output is quantized.
ImageBuffer merge_planes(std::span<const Plane> planes, SampleType type);

/// Same-size 2-D correlation with a dense odd-sized kernel (row-major
/// weights), accumulated row by row then column by column.
Plane correlate(const Plane& src, std::span<const double> weights, int ksize,
                Border border, const simd::Kernels& k = simd::active_kernels());

/// Same-size separable correlation with a 1-D kernel on both axes.
Plane filter_separable(const Plane& src, std::span<const double> kernel, Border border,
                       const simd::Kernels& k = simd::active_kernels());

/// Separable correlation keeping only outputs whose window lies fully
/// inside the image: (w - n + 1) x (h - n + 1).
Plane filter_separable_valid(const Plane& src, std::span<const double> kernel,
                             const simd::Kernels& k = simd::active_kernels());

/// Per-output tap lists for one axis of a separable resampler.
/// Output i reads source samples start[i] .. start[i] + taps - 1
/// (before border mapping) with weights[t * out_size + i].
struct ResampleTable {
  int in_size = 0;
  int out_size = 0;
  int taps = 0;
  std::vector<std::int32_t> start;
  std::vector<double> weights;
};

/// Horizontal pass then vertical pass, float throughout.
Plane resample(const Plane& src, const ResampleTable& x, const ResampleTable& y,
               Border border, const simd::Kernels& k = simd::active_kernels());

}  // namespace afkit
