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

#include <cmath>
#include <string>

#include "afkit/error.hpp"
#include "afkit/iqa.hpp"
#include "iqa_internal.hpp"

namespace afkit::iqa {

namespace {

void require_same_shape(const ImageBuffer& ref, const ImageBuffer& dist) {
  if (!ref.same_shape(dist)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "metric inputs differ in shape: " + std::to_string(ref.width()) + "x" +
                    std::to_string(ref.height()) + "x" + std::to_string(ref.channels()) +
                    " vs " + std::to_string(dist.width()) + "x" +
                    std::to_string(dist.height()) + "x" + std::to_string(dist.channels()));
  }
  if (ref.empty()) throw Error(ErrorCode::kInvalidArgument, "metric inputs are empty");
}

}  // namespace

double psnr(const ImageBuffer& ref, const ImageBuffer& dist, const simd::Kernels& k) {
  require_same_shape(ref, dist);
  const std::size_t n = ref.sample_count();
  double sse = 0.0;
  if (ref.is_u8() && dist.is_u8()) {
    sse = static_cast<double>(k.sum_sq_diff_u8(ref.u8().data(), dist.u8().data(), n));
  } else {
    for (int y = 0; y < ref.height(); ++y) {
      for (int x = 0; x < ref.width(); ++x) {
        for (int c = 0; c < ref.channels(); ++c) {
          const double d = ref.at(x, y, c) - dist.at(x, y, c);
          sse += d * d;
        }
      }
    }
  }
  if (sse == 0.0) return kPsnrIdentical;
  const double mse = sse / static_cast<double>(n);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const ImageBuffer& ref, const ImageBuffer& dist, const simd::Kernels& k) {
  require_same_shape(ref, dist);
  constexpr int kWindow = 11;
  if (ref.width() < kWindow || ref.height() < kWindow) {
    throw Error(ErrorCode::kImageTooSmall, "SSIM needs at least 11x11 pixels");
  }
  constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
  constexpr double kC2 = (0.03 * 255) * (0.03 * 255);
  static const std::vector<double> g = detail::gaussian_taps(kWindow, 1.5);

  const auto a = split_planes(ref);
  const auto b = split_planes(dist);
  double total = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const Plane& x = a[c];
    const Plane& y = b[c];
    Plane xx(x.width, x.height), yy(x.width, x.height), xy(x.width, x.height);
    k.multiply(xx.data.data(), x.data.data(), x.data.data(), x.data.size());
    k.multiply(yy.data.data(), y.data.data(), y.data.data(), y.data.size());
    k.multiply(xy.data.data(), x.data.data(), y.data.data(), x.data.size());
    const Plane mx = filter_separable_valid(x, g, k);
    const Plane my = filter_separable_valid(y, g, k);
    const Plane sxx = filter_separable_valid(xx, g, k);
    const Plane syy = filter_separable_valid(yy, g, k);
    const Plane sxy = filter_separable_valid(xy, g, k);
    double sum = 0.0;
    for (std::size_t i = 0; i < mx.data.size(); ++i) {
      const double m1 = mx.data[i];
      const double m2 = my.data[i];
      const double v1 = sxx.data[i] - m1 * m1;
      const double v2 = syy.data[i] - m2 * m2;
      const double cov = sxy.data[i] - m1 * m2;
      sum += ((2 * m1 * m2 + kC1) * (2 * cov + kC2)) /
             ((m1 * m1 + m2 * m2 + kC1) * (v1 + v2 + kC2));
    }
    total += sum / static_cast<double>(mx.data.size());
  }
  return total / static_cast<double>(a.size());
}

}  // namespace afkit::iqa
