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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "afkit/error.hpp"
#include "afkit/transforms.hpp"

namespace afkit {

namespace {

constexpr double kCubicA = -0.75;

double keys_cubic(double d) {
  d = std::abs(d);
  if (d <= 1.0) return ((kCubicA + 2.0) * d - (kCubicA + 3.0)) * d * d + 1.0;
  if (d < 2.0) return ((kCubicA * d - 5.0 * kCubicA) * d + 8.0 * kCubicA) * d - 4.0 * kCubicA;
  return 0.0;
}

double lanczos4(double d) {
  if (d == 0.0) return 1.0;
  if (std::abs(d) >= 4.0) return 0.0;
  const double px = std::numbers::pi * d;
  return 4.0 * std::sin(px) * std::sin(px / 4.0) / (px * px);
}

}  // namespace

ResampleTable make_resample_table(int in_size, int out_size, ResizeFilter filter) {
  if (in_size < 1 || out_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resample sizes must be >= 1");
  }
  ResampleTable t;
  t.in_size = in_size;
  t.out_size = out_size;
  t.taps = filter == ResizeFilter::kCubic ? 4 : 8;
  const int lead = t.taps / 2 - 1;  // taps left of floor(src)
  t.start.resize(out_size);
  t.weights.assign(static_cast<std::size_t>(t.taps) * out_size, 0.0);
  const double scale = static_cast<double>(in_size) / out_size;
  std::vector<double> w(t.taps);
  for (int i = 0; i < out_size; ++i) {
    const double fx = (i + 0.5) * scale - 0.5;
    const double sx = std::floor(fx);
    const double f = fx - sx;
    t.start[i] = static_cast<std::int32_t>(sx) - lead;
    double sum = 0.0;
    for (int k = 0; k < t.taps; ++k) {
      const double d = f + lead - k;
      if (f == 0.0) {
        // On-grid sample; sin(pi * n) is not exactly zero in floating point.
        w[k] = k == lead ? 1.0 : 0.0;
      } else {
        w[k] = filter == ResizeFilter::kCubic ? keys_cubic(d) : lanczos4(d);
      }
      sum += w[k];
    }
    for (int k = 0; k < t.taps; ++k) {
      t.weights[static_cast<std::size_t>(k) * out_size + i] = w[k] / sum;
    }
  }
  return t;
}

ImageBuffer resize(const ImageBuffer& img, const ResizeSpec& spec, const simd::Kernels& k) {
  if (spec.width < 1 || spec.height < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "resize target must be >= 1x1, got " + std::to_string(spec.width) + "x" +
                    std::to_string(spec.height));
  }
  const ResampleTable tx = make_resample_table(img.width(), spec.width, spec.filter);
  const ResampleTable ty = make_resample_table(img.height(), spec.height, spec.filter);
  auto planes = split_planes(img);
  for (auto& p : planes) p = resample(p, tx, ty, Border::kReplicate, k);
  return merge_planes(planes, img.type());
}

ResizeSpec downsize_dims(int width, int height) {
  ResizeSpec s;
  s.width = std::max(1, width / 2);
  s.height = std::max(1, (3 * height + 2) / 4);
  s.filter = ResizeFilter::kLanczos4;
  return s;
}

}  // namespace afkit
