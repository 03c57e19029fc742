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

#include <random>

#include <gtest/gtest.h>

#include "afkit/error.hpp"
#include "afkit/tiling.hpp"
#include "support.hpp"

namespace afkit {
namespace {

TEST(PlanTiles, Examples) {
  auto g = plan_tiles(300, 100, 256, 32);
  EXPECT_EQ(g.x_origins, (std::vector<int>{0, 44}));
  EXPECT_EQ(g.y_origins, (std::vector<int>{0}));
  EXPECT_EQ(g.tile_height(), 100);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(plan_tiles(512, 512, 256, 32).x_origins, (std::vector<int>{0, 224, 256}));
  EXPECT_EQ(plan_tiles(256, 256, 256, 32).x_origins, (std::vector<int>{0}));
  EXPECT_EQ(plan_tiles(10, 10, 4, 0).x_origins, (std::vector<int>{0, 4, 6}));
  EXPECT_EQ(plan_tiles(300, 100, 256, 32).rect(1), (TileRect{44, 0, 256, 100}));
}

TEST(PlanTiles, InvalidArguments) {
  EXPECT_THROW(plan_tiles(10, 10, 4, 4), Error);
  EXPECT_THROW(plan_tiles(10, 10, 4, -1), Error);
  EXPECT_THROW(plan_tiles(0, 10, 4, 1), Error);
  EXPECT_THROW(plan_tiles(10, 10, 4, 1).rect(99), Error);
}

// Two float tiles with constants c1 and c2 over a 212-wide band: the blend
// at band position p is c1 + (p + 0.5) / 212 * (c2 - c1).
TEST(Merge, FeatherClosedForm) {
  const auto g = plan_tiles(300, 3, 256, 32);
  const double c1 = 10.0, c2 = 110.0;
  std::vector<ImageBuffer> tiles = {
      ImageBuffer::from_float(256, 3, 1, std::vector<double>(256 * 3, c1)),
      ImageBuffer::from_float(256, 3, 1, std::vector<double>(256 * 3, c2))};
  const auto out = merge(tiles, g);
  const int band = 212;
  for (int x = 0; x < 300; ++x) {
    double want = x < 44 ? c1 : x >= 256 ? c2 : c1 + (x - 44 + 0.5) / band * (c2 - c1);
    for (int y = 0; y < 3; ++y) ASSERT_NEAR(out.at(x, y, 0), want, 1e-12) << x;
  }
}

TEST(Merge, IdentityOn512x300) {
  std::mt19937_64 rng(1);
  const auto img = test::random_u8(rng, 512, 300, 3);
  const auto g = plan_tiles(512, 300, 256, 32);
  EXPECT_EQ(merge(split(img, g), g), img);
}

TEST(Merge, IdentityOnRandomGeometries) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const int w = 1 + static_cast<int>(rng() % 90), h = 1 + static_cast<int>(rng() % 90);
    const int window = 2 + static_cast<int>(rng() % 40);
    const int overlap = static_cast<int>(rng() % window);
    const int c = rng() % 2 ? 3 : 1;
    const auto g = plan_tiles(w, h, window, overlap);
    const auto u = test::random_u8(rng, w, h, c);
    ASSERT_EQ(merge(split(u, g), g), u) << w << "x" << h << " w" << window << " o" << overlap;
    const auto f = test::random_float(rng, w, h, c);
    ASSERT_EQ(merge(split(f, g), g), f) << w << "x" << h << " w" << window << " o" << overlap;
  }
}

TEST(Weights, SumToOneEverywhere) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const int w = 1 + static_cast<int>(rng() % 120), h = 1 + static_cast<int>(rng() % 120);
    const int window = 2 + static_cast<int>(rng() % 50);
    const int overlap = static_cast<int>(rng() % window);
    const auto g = plan_tiles(w, h, window, overlap);
    Plane total(w, h);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto r = g.rect(i);
      const Plane wt = tile_weights(g, i);
      for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x) {
          ASSERT_GT(wt.at(x, y), 0.0);
          total.at(r.x + x, r.y + y) += wt.at(x, y);
        }
    }
    for (double v : total.data) ASSERT_NEAR(v, 1.0, 1e-12);
  }
}

TEST(Merge, Errors) {
  const auto g = plan_tiles(20, 20, 8, 2);
  std::mt19937_64 rng(4);
  auto tiles = split(test::random_u8(rng, 20, 20, 1), g);
  auto fewer = tiles;
  fewer.pop_back();
  EXPECT_THROW(merge(fewer, g), Error);
  tiles[1] = test::random_u8(rng, 7, 8, 1);
  EXPECT_THROW(merge(tiles, g), Error);
  EXPECT_THROW(split(test::random_u8(rng, 21, 20, 1), g), Error);
}

TEST(PadReflect, SizesAndValues) {
  auto img = ImageBuffer::from_u8(3, 2, 1, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(pad_reflect(img, 2, 2), img);
  auto p = pad_reflect(img, 5, 3);
  ASSERT_EQ(p.width(), 5);
  ASSERT_EQ(p.height(), 3);
  // Row 0: 1 2 3 | 2 1, row 2 mirrors row 0.
  EXPECT_EQ(std::vector<std::uint8_t>(p.u8().begin(), p.u8().end()),
            (std::vector<std::uint8_t>{1, 2, 3, 2, 1, 4, 5, 6, 5, 4, 1, 2, 3, 2, 1}));
}

}  // namespace
}  // namespace afkit
