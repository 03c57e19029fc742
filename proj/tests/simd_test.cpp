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
#include <cstring>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "afkit/iqa.hpp"
#include "afkit/simd.hpp"
#include "afkit/transforms.hpp"
#include "support.hpp"

namespace afkit::simd {
namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

class LevelTest : public ::testing::TestWithParam<Level> {};

TEST(Dispatch, ScalarAlwaysAvailable) {
  const auto levels = available_levels();
  ASSERT_FALSE(levels.empty());
  EXPECT_EQ(levels.front(), Level::kScalar);
  EXPECT_EQ(scalar_kernels().level, Level::kScalar);
  EXPECT_EQ(level_name(Level::kAvx2), "avx2");
}

TEST_P(LevelTest, ElementKernelsMatchScalarBitwise) {
  const Kernels& s = scalar_kernels();
  const Kernels& v = kernels_for(GetParam());
  std::mt19937_64 rng(11);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 31u, 64u, 257u}) {
    auto a = random_vec(rng, n, -100, 100), b = random_vec(rng, n, -100, 100);
    auto d1 = random_vec(rng, n, -1, 1), d2 = d1;
    s.axpy(d1.data(), a.data(), 0.3721, n);
    v.axpy(d2.data(), a.data(), 0.3721, n);
    EXPECT_TRUE(bit_equal(d1, d2)) << "axpy n=" << n;

    std::vector<double> m1(n), m2(n);
    s.multiply(m1.data(), a.data(), b.data(), n);
    v.multiply(m2.data(), a.data(), b.data(), n);
    EXPECT_TRUE(bit_equal(m1, m2)) << "multiply n=" << n;

    std::vector<std::uint8_t> ua(n), ub(n);
    for (std::size_t i = 0; i < n; ++i) {
      ua[i] = static_cast<std::uint8_t>(rng());
      ub[i] = static_cast<std::uint8_t>(rng());
    }
    EXPECT_EQ(s.sum_sq_diff_u8(ua.data(), ub.data(), n), v.sum_sq_diff_u8(ua.data(), ub.data(), n));

    auto q = random_vec(rng, n, -20, 280);
    if (n > 2) {
      q[0] = std::numeric_limits<double>::quiet_NaN();
      q[1] = 2.5;
      q[2] = -0.5;
    }
    std::vector<std::uint8_t> q1(n), q2(n);
    s.quantize_u8(q.data(), q1.data(), n);
    v.quantize_u8(q.data(), q2.data(), n);
    EXPECT_EQ(q1, q2) << "quantize n=" << n;
  }
}

TEST_P(LevelTest, GatherTapsMatchesScalarBitwise) {
  const Kernels& s = scalar_kernels();
  const Kernels& v = kernels_for(GetParam());
  std::mt19937_64 rng(12);
  for (int taps : {1, 2, 4, 8, 9}) {
    for (std::size_t n : {1u, 3u, 4u, 17u, 100u}) {
      auto src = random_vec(rng, n + taps + 8, 0, 255);
      std::vector<std::int32_t> start(n);
      for (auto& st : start) st = static_cast<std::int32_t>(rng() % (n + 8));
      auto w = random_vec(rng, n * taps, -1, 1);
      std::vector<double> d1(n), d2(n);
      s.gather_taps(d1.data(), src.data(), start.data(), w.data(), taps, n);
      v.gather_taps(d2.data(), src.data(), start.data(), w.data(), taps, n);
      EXPECT_TRUE(bit_equal(d1, d2)) << "taps " << taps << " n " << n;
    }
  }
}

TEST_P(LevelTest, FiltersAndMetricsMatchScalar) {
  const Kernels& s = scalar_kernels();
  const Kernels& v = kernels_for(GetParam());
  std::mt19937_64 rng(13);
  for (int i = 0; i < 6; ++i) {
    const int w = 33 + static_cast<int>(rng() % 40), h = 33 + static_cast<int>(rng() % 40);
    auto img = test::smooth_u8(rng, w, h, 3);
    auto f = test::random_float(rng, w, h, 1);
    EXPECT_EQ(convolve2d(img, Kernel2D::gaussian_blur5(), s), convolve2d(img, Kernel2D::gaussian_blur5(), v));
    EXPECT_EQ(convolve2d(f, Kernel2D::sharpen3(), s), convolve2d(f, Kernel2D::sharpen3(), v));
    for (auto filt : {ResizeFilter::kCubic, ResizeFilter::kLanczos4}) {
      ResizeSpec spec{w / 2 + 3, h * 3 / 2, filt};
      EXPECT_EQ(resize(img, spec, s), resize(img, spec, v));
      EXPECT_EQ(resize(f, spec, s), resize(f, spec, v));
    }
    auto noisy = add_gaussian_noise(img, 10, i);
    EXPECT_EQ(iqa::psnr(img, noisy, s), iqa::psnr(img, noisy, v));
    EXPECT_EQ(iqa::ssim(img, noisy, s), iqa::ssim(img, noisy, v));
    EXPECT_EQ(iqa::brisque_features(noisy, s), iqa::brisque_features(noisy, v));
  }
}

INSTANTIATE_TEST_SUITE_P(Available, LevelTest, ::testing::ValuesIn(available_levels()),
                         [](const auto& info) { return std::string(level_name(info.param)); });

}  // namespace
}  // namespace afkit::simd
