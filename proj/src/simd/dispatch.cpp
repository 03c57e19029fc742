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

#include <cstdlib>
#include <string>

#include "afkit/error.hpp"
#include "afkit/simd.hpp"

namespace afkit::simd {

#ifdef AFKIT_HAVE_AVX2
const Kernels& avx2_kernels();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(AFKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Kernels& select_active() {
  const char* forced = std::getenv("AFKIT_SIMD");
  if (forced != nullptr) {
    const std::string f = forced;
    if (f == "scalar") return scalar_kernels();
    if (f == "avx2") return kernels_for(Level::kAvx2);
  }
  return kernels_for(available_levels().back());
}

}  // namespace

std::string_view level_name(Level level) {
  switch (level) {
    case Level::kScalar: return "scalar";
    case Level::kAvx2: return "avx2";
  }
  return "unknown";
}

std::vector<Level> available_levels() {
  std::vector<Level> levels{Level::kScalar};
  if (cpu_has_avx2()) levels.push_back(Level::kAvx2);
  return levels;
}

const Kernels& kernels_for(Level level) {
  switch (level) {
    case Level::kScalar:
      return scalar_kernels();
    case Level::kAvx2:
#ifdef AFKIT_HAVE_AVX2
      if (cpu_has_avx2()) return avx2_kernels();
#endif
      break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "SIMD level " + std::string(level_name(level)) + " not available");
}

const Kernels& active_kernels() {
  static const Kernels& k = select_active();
  return k;
}

}  // namespace afkit::simd
