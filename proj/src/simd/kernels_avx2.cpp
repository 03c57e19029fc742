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

// Compiled with -mavx2 -mno-fma. Only reached through the dispatch table
// after a runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "afkit/simd.hpp"

namespace afkit::simd {

namespace {

void axpy_avx2(double* dst, const double* src, double w, std::size_t n) {
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d d0 = _mm256_loadu_pd(dst + i);
    __m256d d1 = _mm256_loadu_pd(dst + i + 4);
    d0 = _mm256_add_pd(d0, _mm256_mul_pd(vw, _mm256_loadu_pd(src + i)));
    d1 = _mm256_add_pd(d1, _mm256_mul_pd(vw, _mm256_loadu_pd(src + i + 4)));
    _mm256_storeu_pd(dst + i, d0);
    _mm256_storeu_pd(dst + i + 4, d1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    d = _mm256_add_pd(d, _mm256_mul_pd(vw, _mm256_loadu_pd(src + i)));
    _mm256_storeu_pd(dst + i, d);
  }
  for (; i < n; ++i) dst[i] += w * src[i];
}

void gather_taps_avx2(double* dst, const double* src, const std::int32_t* start,
                      const double* weights, int taps, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i base =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(start + i));
    __m256d acc = _mm256_setzero_pd();
    for (int t = 0; t < taps; ++t) {
      const __m128i idx = _mm_add_epi32(base, _mm_set1_epi32(t));
      const __m256d s = _mm256_i32gather_pd(src, idx, 8);
      const __m256d w = _mm256_loadu_pd(weights + t * n + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w, s));
    }
    _mm256_storeu_pd(dst + i, acc);
  }
  for (; i < n; ++i) {
    const double* s = src + start[i];
    double acc = 0.0;
    for (int t = 0; t < taps; ++t) acc += weights[t * n + i] * s[t];
    dst[i] = acc;
  }
}

void multiply_avx2(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] * b[i];
}

std::uint64_t sum_sq_diff_u8_avx2(const std::uint8_t* a, const std::uint8_t* b,
                                  std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256i va = _mm256_cvtepu8_epi16(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i)));
    const __m256i vb = _mm256_cvtepu8_epi16(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i)));
    const __m256i d = _mm256_sub_epi16(va, vb);
    const __m256i sq = _mm256_madd_epi16(d, d);  // 8 x int32, each <= 130050
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(sq)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(sq, 1)));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    const int d = int(a[i]) - int(b[i]);
    total += static_cast<std::uint64_t>(d * d);
  }
  return total;
}

void quantize_u8_avx2(const double* src, std::uint8_t* dst, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d hi = _mm256_set1_pd(255.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(src + i);
    const __m256d positive = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
    const __m256d c = _mm256_min_pd(v, hi);
    const __m256d t = _mm256_round_pd(c, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
    const __m256d up = _mm256_cmp_pd(_mm256_sub_pd(c, t), half, _CMP_GE_OQ);
    __m256d r = _mm256_add_pd(t, _mm256_and_pd(up, one));
    r = _mm256_and_pd(r, positive);
    const __m128i i32 = _mm256_cvttpd_epi32(r);
    const __m128i i16 = _mm_packus_epi32(i32, i32);
    const __m128i i8 = _mm_packus_epi16(i16, i16);
    const int packed = _mm_cvtsi128_si32(i8);
    std::memcpy(dst + i, &packed, 4);
  }
  for (; i < n; ++i) {
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

const Kernels& avx2_kernels() {
  static const Kernels k{Level::kAvx2,       axpy_avx2,
                         gather_taps_avx2,   multiply_avx2,
                         sum_sq_diff_u8_avx2, quantize_u8_avx2};
  return k;
}

}  // namespace afkit::simd
