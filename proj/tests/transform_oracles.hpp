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

// Nested-loop reference implementations of convolution and resampling.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "afkit/image.hpp"
#include "afkit/transforms.hpp"

namespace afkit::test::oracle {

inline int border101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

inline ImageBuffer conv_oracle(const ImageBuffer& img, const Kernel2D& k) {
  const int r = k.size() / 2;
  std::vector<double> out(img.sample_count());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < img.channels(); ++c) {
        double acc = 0;
        for (int j = -r; j <= r; ++j)
          for (int i = -r; i <= r; ++i)
            acc += k.weights()[(j + r) * k.size() + (i + r)] *
                   img.at(border101(x + i, img.width()), border101(y + j, img.height()), c);
        out[(static_cast<std::size_t>(y) * img.width() + x) * img.channels() + c] = acc;
      }
  return ImageBuffer::from_float(img.width(), img.height(), img.channels(), std::move(out));
}

inline double cubic_w(double d) {
  const double a = -0.75;
  d = std::fabs(d);
  if (d <= 1) return (a + 2) * d * d * d - (a + 3) * d * d + 1;
  if (d < 2) return a * d * d * d - 5 * a * d * d + 8 * a * d - 4 * a;
  return 0;
}

inline double lanczos_w(double d) {
  if (std::fabs(d) < 1e-12) return 1;
  if (std::fabs(d) >= 4) return 0;
  const double p = std::numbers::pi * d;
  return std::sin(p) / p * std::sin(p / 4) / (p / 4);
}

// Normalized 1-D weights and source indices for output sample i.
inline void axis_taps(int in, int out, int i, ResizeFilter f, std::vector<int>& idx,
               std::vector<double>& w) {
  const int n = f == ResizeFilter::kCubic ? 2 : 4;
  const double s = (i + 0.5) * in / static_cast<double>(out) - 0.5;
  const int base = static_cast<int>(std::floor(s));
  idx.clear();
  w.clear();
  double sum = 0;
  for (int t = base - n + 1; t <= base + n; ++t) {
    const double d = s - t;
    const double v = f == ResizeFilter::kCubic ? cubic_w(d) : lanczos_w(d);
    idx.push_back(std::clamp(t, 0, in - 1));
    w.push_back(v);
    sum += v;
  }
  for (auto& v : w) v /= sum;
}

inline ImageBuffer resize_oracle(const ImageBuffer& img, int ow, int oh, ResizeFilter f) {
  std::vector<double> out(static_cast<std::size_t>(ow) * oh * img.channels());
  std::vector<int> ix, iy;
  std::vector<double> wx, wy;
  for (int y = 0; y < oh; ++y) {
    axis_taps(img.height(), oh, y, f, iy, wy);
    for (int x = 0; x < ow; ++x) {
      axis_taps(img.width(), ow, x, f, ix, wx);
      for (int c = 0; c < img.channels(); ++c) {
        double acc = 0;
        for (std::size_t j = 0; j < iy.size(); ++j)
          for (std::size_t i = 0; i < ix.size(); ++i) acc += wy[j] * wx[i] * img.at(ix[i], iy[j], c);
        out[(static_cast<std::size_t>(y) * ow + x) * img.channels() + c] = acc;
      }
    }
  }
  return ImageBuffer::from_float(ow, oh, img.channels(), std::move(out));
}

}  // namespace afkit::test::oracle
