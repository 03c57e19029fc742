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

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace afkit::simd {

enum class Level { kScalar, kAvx2 };

std::string_view level_name(Level level);

/// Inner loops shared by convolution, resampling and the quality metrics.
///
/// Every variant accumulates in the same order as the scalar reference and
/// never fuses multiply-add, so all levels produce bit-identical results.
struct Kernels {
  Level level;

  /// dst[i] += w * src[i]
  void (*axpy)(double* dst, const double* src, double w, std::size_t n);

  /// dst[i] = sum_t weights[t * n + i] * src[start[i] + t], t ascending.
  void (*gather_taps)(double* dst, const double* src, const std::int32_t* start,
                      const double* weights, int taps, std::size_t n);

  /// dst[i] = a[i] * b[i]
  void (*multiply)(double* dst, const double* a, const double* b, std::size_t n);

  /// sum (a[i] - b[i])^2, exact integer arithmetic.
  std::uint64_t (*sum_sq_diff_u8)(const std::uint8_t* a, const std::uint8_t* b,
                                  std::size_t n);

  /// Round half away from zero, clamp to [0,255], NaN to 0.
  void (*quantize_u8)(const double* src, std::uint8_t* dst, std::size_t n);
};

const Kernels& scalar_kernels();

/// Levels compiled in and supported by the running CPU, scalar first.
std::vector<Level> available_levels();

const Kernels& kernels_for(Level level);

/// Best available level, unless AFKIT_SIMD=scalar|avx2 forces one.
const Kernels& active_kernels();

}  // namespace afkit::simd
