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

#include <cmath>
#include <vector>

namespace afkit::iqa::detail {

/// Sampled Gaussian of odd length n, normalized to sum 1.
inline std::vector<double> gaussian_taps(int n, double sigma) {
  std::vector<double> w(n);
  const int r = n / 2;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = i - r;
    w[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace afkit::iqa::detail
