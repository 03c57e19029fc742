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

#include <array>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "afkit/image.hpp"
#include "afkit/plane.hpp"
#include "afkit/simd.hpp"

namespace afkit::iqa {

/// PSNR of identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// 10*log10(255^2 / MSE) with the MSE pooled over every sample. 8-bit pairs
/// use an exact integer error sum. Throws kDimensionMismatch.
double psnr(const ImageBuffer& ref, const ImageBuffer& dist,
            const simd::Kernels& k = simd::active_kernels());

/// Mean SSIM (11x11 Gaussian, sigma 1.5, K1 0.01, K2 0.03, L 255) over
/// windows lying fully inside the image, averaged over channels.
/// Throws kDimensionMismatch, or kImageTooSmall below 11x11.
double ssim(const ImageBuffer& ref, const ImageBuffer& dist,
            const simd::Kernels& k = simd::active_kernels());

/// Mean-subtracted contrast-normalized coefficients, (I - mu) / (sigma + 1),
/// with mu/sigma from a 7x7 Gaussian (sigma 7/6), reflect-101 borders.
/// Expects samples on the 0..255 scale.
Plane mscn(const Plane& luma, const simd::Kernels& k = simd::active_kernels());

struct GgdParams {
  double alpha = 0.0;
  double sigma_sq = 0.0;
};

/// Moment-matching generalized Gaussian fit, alpha searched over
/// [0.2, 10] step 0.001. All-zero input gives {0.2, 0}.
GgdParams ggd_fit(std::span<const double> samples);

struct AggdParams {
  double alpha = 0.0;
  double sigma_left = 0.0;   // standard deviations of each side
  double sigma_right = 0.0;
  double mean = 0.0;
};

/// Asymmetric generalized Gaussian moment-matching fit over the same alpha
/// grid. Needs at least 2 samples (kInvalidArgument). All-zero input gives
/// {0.2, 0, 0, 0}. Zero samples belong to neither side.
AggdParams aggd_fit(std::span<const double> samples);

/// The (row, col) neighbour offsets of the four pairwise products:
/// horizontal, vertical, main diagonal, anti-diagonal.
inline constexpr std::array<std::array<int, 2>, 4> kPairShifts = {
    {{0, 1}, {1, 0}, {1, 1}, {1, -1}}};

/// Products m(y,x) * m(y+dy, x+dx) over all positions where both lie inside
/// the plane, row-major.
std::vector<double> pair_products(const Plane& m, int dy, int dx);

/// Half-resolution plane for the second BRISQUE scale: antialiased bicubic
/// (a = -0.5) at scale 1/2, symmetric borders, output ceil(n/2).
Plane half_scale(const Plane& src, const simd::Kernels& k = simd::active_kernels());

/// The 18 features of one scale: GGD (alpha, sigma^2) of the MSCN plane, then
/// for each pair direction AGGD (alpha, mean, left^2, right^2).
std::array<double, 18> scale_features(const Plane& luma,
                                      const simd::Kernels& k = simd::active_kernels());

inline constexpr int kBrisqueFeatures = 36;
inline constexpr int kBrisqueMinSize = 32;

/// 36 features: scale_features at full and half resolution. RGB input is
/// converted to BT.601 luma rounded to 8 bits first. Throws kImageTooSmall
/// below 32x32.
std::array<double, kBrisqueFeatures> brisque_features(
    const ImageBuffer& img, const simd::Kernels& k = simd::active_kernels());

/// Epsilon-SVR with an RBF kernel over range-scaled features.
class BrisqueModel {
 public:
  struct SupportVector {
    double coef = 0.0;
    std::vector<double> x;
  };

  BrisqueModel(double gamma, double rho, double scale_lower, double scale_upper,
               std::vector<std::array<double, 2>> ranges,
               std::vector<SupportVector> support_vectors);

  /// Parses the plain-text model format. Throws kModelFormat with the line
  /// number on any violation.
  static BrisqueModel parse(const std::string& text);
  static BrisqueModel load(const std::filesystem::path& path);

  int dimension() const noexcept { return static_cast<int>(ranges_.size()); }
  double gamma() const noexcept { return gamma_; }
  double rho() const noexcept { return rho_; }
  std::size_t support_vector_count() const noexcept { return svs_.size(); }

  /// lower + (upper - lower) * (f - min) / (max - min), per feature.
  std::vector<double> scale(std::span<const double> features) const;

  /// sum_i coef_i * exp(-gamma * |x - sv_i|^2) - rho on scaled features.
  /// Throws kDimensionMismatch.
  double predict(std::span<const double> features) const;

 private:
  double gamma_;
  double rho_;
  double lower_;
  double upper_;
  std::vector<std::array<double, 2>> ranges_;
  std::vector<SupportVector> svs_;
};

double brisque_score(std::span<const double> features, const BrisqueModel& model);

/// Features and score in one call.
double brisque(const ImageBuffer& img, const BrisqueModel& model);

/// Model path baked in at build time (the shipped LIVE model).
std::filesystem::path default_brisque_model_path();

}  // namespace afkit::iqa
