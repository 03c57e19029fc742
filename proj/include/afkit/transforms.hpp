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
#include <vector>

#include "afkit/image.hpp"
#include "afkit/plane.hpp"
#include "afkit/simd.hpp"

namespace afkit {

/// Square correlation kernel with odd size, weights row-major.
class Kernel2D {
 public:
  Kernel2D(int size, std::vector<double> weights);

  /// 5x5 integer Gaussian scaled by 1/273.
  static Kernel2D gaussian_blur5();
  /// 3x3 sharpen: center 5, 4-neighbours -1, corners 0.
  static Kernel2D sharpen3();

  int size() const noexcept { return size_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double sum() const noexcept;

 private:
  int size_;
  std::vector<double> weights_;
};

/// Per-channel correlation with reflect-101 borders. 8-bit input is
/// processed in float and quantized once at the end; float input stays float.
ImageBuffer convolve2d(const ImageBuffer& img, const Kernel2D& kernel,
                       const simd::Kernels& k = simd::active_kernels());

ImageBuffer blur5(const ImageBuffer& img);
ImageBuffer sharpen3(const ImageBuffer& img);

/// Adds i.i.d. N(0, sigma^2) to every sample (row-major, channel-interleaved
/// order, one NormalSampler draw per sample), then quantizes. 8-bit input only.
ImageBuffer add_gaussian_noise(const ImageBuffer& img, double sigma, std::uint64_t seed);

enum class ResizeFilter { kLanczos4, kCubic };

struct ResizeSpec {
  int width = 0;
  int height = 0;
  ResizeFilter filter = ResizeFilter::kCubic;
};

/// Separable resampling with center-aligned mapping
/// src = (dst + 0.5) * (in / out) - 0.5 and edge clamping. Cubic is the
/// Keys kernel with a = -0.75 (4 taps); lanczos4 is sinc windowed by
/// sinc(x/4) (8 taps). Weights are normalized per output sample. There is
/// no antialiasing prefilter on downscale, matching the usual library
/// behaviour. 8-bit input is quantized once at the end.
ImageBuffer resize(const ImageBuffer& img, const ResizeSpec& spec,
                   const simd::Kernels& k = simd::active_kernels());

ResampleTable make_resample_table(int in_size, int out_size, ResizeFilter filter);

/// Dimensions for the asymmetric downsize: (floor(w / 2), round(3 h / 4)),
/// each at least 1. 3h/4 rounds half up (h = 2 -> 2, h = 6 -> 5).
ResizeSpec downsize_dims(int width, int height);

}  // namespace afkit
