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

#include <iosfwd>
#include <string>
#include <vector>

namespace afkit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // I/O and other runtime errors
  kExitUsage = 2,    // bad flags, schema or pairing errors
  kExitPartial = 3,  // some batch images failed
  kExitWorker = 4,   // the restoration or detection worker failed
};

/// Runs `afkit <args...>` (program name excluded). Normal output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace afkit::cli
