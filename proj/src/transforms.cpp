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

#include "afkit/transforms.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "afkit/error.hpp"
#include "afkit/rng.hpp"

namespace afkit {

Kernel2D::Kernel2D(int size, std::vector<double> weights)
    : size_(size), weights_(std::move(weights)) {
  if (size < 1 || size % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "kernel size must be odd, got " + std::to_string(size));
  }
  if (weights_.size() != static_cast<std::size_t>(size) * size) {
    throw Error(ErrorCode::kInvalidArgument, "kernel needs size*size weights");
  }
}

Kernel2D Kernel2D::gaussian_blur5() {
  static constexpr double kInt[25] = {
      1, 4,  7,  4,  1,   //
      4, 16, 26, 16, 4,   //
      7, 26, 41, 26, 7,   //
      4, 16, 26, 16, 4,   //
      1, 4,  7,  4,  1};
  std::vector<double> w(25);
  for (int i = 0; i < 25; ++i) w[i] = kInt[i] / 273.0;
  return Kernel2D(5, std::move(w));
}

Kernel2D Kernel2D::sharpen3() {
  return Kernel2D(3, {0, -1, 0, -1, 5, -1, 0, -1, 0});
}

double Kernel2D::sum() const noexcept {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

ImageBuffer convolve2d(const ImageBuffer& img, const Kernel2D& kernel,
                       const simd::Kernels& k) {
  auto planes = split_planes(img);
  for (auto& p : planes) {
    p = correlate(p, kernel.weights(), kernel.size(), Border::kReflect101, k);
  }
  return merge_planes(planes, img.type());
}

ImageBuffer blur5(const ImageBuffer& img) {
  static const Kernel2D kernel = Kernel2D::gaussian_blur5();
  return convolve2d(img, kernel);
}

ImageBuffer sharpen3(const ImageBuffer& img) {
  static const Kernel2D kernel = Kernel2D::sharpen3();
  return convolve2d(img, kernel);
}

ImageBuffer add_gaussian_noise(const ImageBuffer& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigma must be finite and >= 0");
  }
  if (!img.is_u8()) {
    throw Error(ErrorCode::kInvalidArgument, "add_gaussian_noise expects 8-bit input");
  }
  const auto src = img.u8();
  std::vector<std::uint8_t> out(src.size());
  NormalSampler normal(seed);
  for (std::size_t i = 0; i < src.size(); ++i) {
    out[i] = saturate_u8(static_cast<double>(src[i]) + sigma * normal.next());
  }
  return ImageBuffer::from_u8(img.width(), img.height(), img.channels(), std::move(out));
}

}  // namespace afkit
