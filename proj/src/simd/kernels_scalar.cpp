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

#include "afkit/simd.hpp"

namespace afkit::simd {

namespace {

void axpy_scalar(double* dst, const double* src, double w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += w * src[i];
}

void gather_taps_scalar(double* dst, const double* src, const std::int32_t* start,
                        const double* weights, int taps, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* s = src + start[i];
    double acc = 0.0;
    for (int t = 0; t < taps; ++t) acc += weights[t * n + i] * s[t];
    dst[i] = acc;
  }
}

void multiply_scalar(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

std::uint64_t sum_sq_diff_u8_scalar(const std::uint8_t* a, const std::uint8_t* b,
                                    std::size_t n) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int d = int(a[i]) - int(b[i]);
    acc += static_cast<std::uint64_t>(d * d);
  }
  return acc;
}

void quantize_u8_scalar(const double* src, std::uint8_t* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = src[i];
    if (!(v > 0.0)) {
      dst[i] = 0;
    } else if (v >= 255.0) {
      dst[i] = 255;
    } else {
      const double t = std::trunc(v);
      dst[i] = static_cast<std::uint8_t>(v - t >= 0.5 ? t + 1.0 : t);
    }
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Level::kScalar,       axpy_scalar,
                         gather_taps_scalar,   multiply_scalar,
                         sum_sq_diff_u8_scalar, quantize_u8_scalar};
  return k;
}

}  // namespace afkit::simd
