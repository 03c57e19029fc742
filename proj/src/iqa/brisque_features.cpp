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
#include <limits>
#include <string>

#include "afkit/error.hpp"
#include "afkit/iqa.hpp"
#include "iqa_internal.hpp"

namespace afkit::iqa {

namespace {

constexpr double kAlphaMin = 0.2;
constexpr double kAlphaStep = 0.001;
constexpr int kAlphaCount = 9801;  // 0.2 .. 10.0 inclusive

double grid_alpha(int i) { return kAlphaMin + i * kAlphaStep; }

// Gamma-function ratio tables over the alpha grid.
struct RatioTables {
  std::vector<double> ggd;   // G(1/a) G(3/a) / G(2/a)^2
  std::vector<double> aggd;  // G(2/a)^2 / (G(1/a) G(3/a))
};

const RatioTables& ratio_tables() {
  static const RatioTables t = [] {
    RatioTables r;
    r.ggd.resize(kAlphaCount);
    r.aggd.resize(kAlphaCount);
    for (int i = 0; i < kAlphaCount; ++i) {
      const double a = grid_alpha(i);
      const double g1 = std::tgamma(1.0 / a);
      const double g2 = std::tgamma(2.0 / a);
      const double g3 = std::tgamma(3.0 / a);
      r.ggd[i] = g1 * g3 / (g2 * g2);
      r.aggd[i] = g2 * g2 / (g1 * g3);
    }
    return r;
  }();
  return t;
}

// First grid index minimizing |table - target|.
int argmin_abs(const std::vector<double>& table, double target) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kAlphaCount; ++i) {
    const double d = std::abs(table[i] - target);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double keys_cubic_a05(double x) {
  // Keys cubic, a = -0.5.
  const double ax = std::abs(x);
  const double ax2 = ax * ax;
  const double ax3 = ax2 * ax;
  if (ax <= 1.0) return 1.5 * ax3 - 2.5 * ax2 + 1.0;
  if (ax <= 2.0) return -0.5 * ax3 + 2.5 * ax2 - 4.0 * ax + 2.0;
  return 0.0;
}

ResampleTable half_table(int n) {
  ResampleTable t;
  t.in_size = n;
  t.out_size = (n + 1) / 2;
  t.taps = 8;
  t.start.resize(t.out_size);
  t.weights.assign(static_cast<std::size_t>(t.taps) * t.out_size, 0.0);
  // Output o sits at input coordinate 2o + 0.5; the kernel is stretched by 2
  // (and scaled by 1/2) to low-pass before decimation.
  double w[8];
  for (int o = 0; o < t.out_size; ++o) {
    t.start[o] = 2 * o - 3;
    double sum = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double d = (2 * o + 0.5) - (t.start[o] + k);
      w[k] = 0.5 * keys_cubic_a05(0.5 * d);
      sum += w[k];
    }
    for (int k = 0; k < 8; ++k) {
      t.weights[static_cast<std::size_t>(k) * t.out_size + o] = w[k] / sum;
    }
  }
  return t;
}

Plane luma_plane(const ImageBuffer& img) {
  if (img.channels() == 1) return split_planes(img)[0];
  ImageBuffer y = to_luma(img);
  if (img.is_u8()) y = quantize_u8(y);
  return split_planes(y)[0];
}

}  // namespace

Plane mscn(const Plane& luma, const simd::Kernels& k) {
  static const std::vector<double> g = detail::gaussian_taps(7, 7.0 / 6.0);
  const Plane mu = filter_separable(luma, g, Border::kReflect101, k);
  Plane sq(luma.width, luma.height);
  k.multiply(sq.data.data(), luma.data.data(), luma.data.data(), sq.data.size());
  const Plane mu_sq = filter_separable(sq, g, Border::kReflect101, k);
  Plane out(luma.width, luma.height);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const double m = mu.data[i];
    const double sigma = std::sqrt(std::abs(mu_sq.data[i] - m * m));
    out.data[i] = (luma.data[i] - m) / (sigma + 1.0);
  }
  return out;
}

GgdParams ggd_fit(std::span<const double> samples) {
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "ggd_fit needs samples");
  double sq = 0.0;
  double ab = 0.0;
  for (double v : samples) {
    sq += v * v;
    ab += std::abs(v);
  }
  const double n = static_cast<double>(samples.size());
  const double sigma_sq = sq / n;
  const double e = ab / n;
  if (e == 0.0) return {kAlphaMin, 0.0};
  const double rho = sigma_sq / (e * e);
  return {grid_alpha(argmin_abs(ratio_tables().ggd, rho)), sigma_sq};
}

AggdParams aggd_fit(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "aggd_fit needs at least 2 samples");
  }
  double left_sq = 0.0, right_sq = 0.0, ab = 0.0;
  std::size_t left_n = 0, right_n = 0;
  for (double v : samples) {
    if (v < 0) {
      left_sq += v * v;
      ++left_n;
    } else if (v > 0) {
      right_sq += v * v;
      ++right_n;
    }
    ab += std::abs(v);
  }
  if (left_n == 0 && right_n == 0) return {kAlphaMin, 0.0, 0.0, 0.0};
  const double n = static_cast<double>(samples.size());
  const double left = left_n ? std::sqrt(left_sq / static_cast<double>(left_n)) : 0.0;
  const double right = right_n ? std::sqrt(right_sq / static_cast<double>(right_n)) : 0.0;
  const double mean_abs = ab / n;
  const double rhat = mean_abs * mean_abs / ((left_sq + right_sq) / n);
  double rhatnorm = rhat;  // one-sided data: the gamma-hat factor tends to 1
  if (left_n && right_n) {
    const double g = left / right;
    rhatnorm = rhat * (g * g * g + 1) * (g + 1) / ((g * g + 1) * (g * g + 1));
  }
  const double alpha = grid_alpha(argmin_abs(ratio_tables().aggd, rhatnorm));
  const double g1 = std::tgamma(1.0 / alpha);
  const double g2 = std::tgamma(2.0 / alpha);
  const double g3 = std::tgamma(3.0 / alpha);
  const double mean = (right - left) * (g2 / g1) * std::sqrt(g1 / g3);
  return {alpha, left, right, mean};
}

std::vector<double> pair_products(const Plane& m, int dy, int dx) {
  std::vector<double> out;
  const int y0 = std::max(0, -dy), y1 = std::min(m.height, m.height - dy);
  const int x0 = std::max(0, -dx), x1 = std::min(m.width, m.width - dx);
  if (y1 <= y0 || x1 <= x0) return out;
  out.reserve(static_cast<std::size_t>(y1 - y0) * (x1 - x0));
  for (int y = y0; y < y1; ++y) {
    const double* a = m.row(y);
    const double* b = m.row(y + dy);
    for (int x = x0; x < x1; ++x) out.push_back(a[x] * b[x + dx]);
  }
  return out;
}

Plane half_scale(const Plane& src, const simd::Kernels& k) {
  return resample(src, half_table(src.width), half_table(src.height), Border::kSymmetric, k);
}

std::array<double, 18> scale_features(const Plane& luma, const simd::Kernels& k) {
  const Plane m = mscn(luma, k);
  std::array<double, 18> f{};
  const GgdParams g = ggd_fit(m.data);
  f[0] = g.alpha;
  f[1] = g.sigma_sq;
  for (std::size_t s = 0; s < kPairShifts.size(); ++s) {
    const auto prods = pair_products(m, kPairShifts[s][0], kPairShifts[s][1]);
    const AggdParams a = aggd_fit(prods);
    f[2 + 4 * s] = a.alpha;
    f[3 + 4 * s] = a.mean;
    f[4 + 4 * s] = a.sigma_left * a.sigma_left;
    f[5 + 4 * s] = a.sigma_right * a.sigma_right;
  }
  return f;
}

std::array<double, kBrisqueFeatures> brisque_features(const ImageBuffer& img,
                                                      const simd::Kernels& k) {
  if (img.width() < kBrisqueMinSize || img.height() < kBrisqueMinSize) {
    throw Error(ErrorCode::kImageTooSmall,
                "BRISQUE needs at least 32x32 pixels, got " + std::to_string(img.width()) +
                    "x" + std::to_string(img.height()));
  }
  const Plane full = luma_plane(img);
  const auto f0 = scale_features(full, k);
  const auto f1 = scale_features(half_scale(full, k), k);
  std::array<double, kBrisqueFeatures> out{};
  std::copy(f0.begin(), f0.end(), out.begin());
  std::copy(f1.begin(), f1.end(), out.begin() + 18);
  return out;
}

}  // namespace afkit::iqa
