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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "afkit/image.hpp"

namespace afkit {

enum class WorkerTask {
  kFbcnn,
  kRestormerDenoise,
  kSwinfirX2,
  kDetectTrufor,
  kDetectEarlyFusion,
};

std::string_view task_name(WorkerTask task);
/// Throws kInvalidArgument for unknown names.
WorkerTask parse_task(std::string_view name);
bool is_detection_task(WorkerTask task);

/// Numeric task parameters (e.g. "sigma").
using WorkerParams = std::map<std::string, double>;

/// restormer-denoise needs "sigma" >= 0; other tasks take no parameters.
/// Throws kInvalidArgument.
void validate_task_params(WorkerTask task, const WorkerParams& params);

struct WorkerRequest {
  WorkerTask task = WorkerTask::kFbcnn;
  WorkerParams params;
  std::filesystem::path input;
  std::filesystem::path output;
};

struct WorkerStatus {
  std::uint64_t id = 0;
  bool ok = false;
  std::string message;
};

/// Image-to-image restoration, implemented by the subprocess client and by
/// in-process fakes in tests.
class RestorationBackend {
 public:
  virtual ~RestorationBackend() = default;

  /// Output dimensions equal the input's, or exactly double for swinfir-x2;
  /// anything else is a kWorkerContract error.
  virtual ImageBuffer restore(WorkerTask task, const WorkerParams& params,
                              const ImageBuffer& input) = 0;

  /// Concurrent requests the backend accepts.
  virtual int capacity() const { return 1; }
};

struct WorkerEndpoint {
  /// Command line, split on whitespace; single or double quotes group words.
  std::string command;
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};
  /// Where job PNGs are staged. Empty = a private directory under the
  /// system temp dir, removed with the client.
  std::filesystem::path scratch_dir;
};

/// Splits a command line the way WorkerEndpoint::command describes.
std::vector<std::string> split_command(std::string_view command);

/// Client for a long-running worker subprocess speaking line-delimited JSON:
///
///   worker -> client, once:  {"protocol":1,"capacity":n}
///   client -> worker:        {"id":k,"task":..,"params":{..},"input":..,"output":..}
///   worker -> client:        {"id":k,"status":"ok"|"error","message":..}
///
/// Restoration results are PNG files at `output`; detection results are a
/// JSON record {"id":k,"score":s} with s in [0,1]. The worker is started on
/// first use and restarted after it dies. Thread-safe; at most `capacity`
/// requests are in flight.
///
/// Errors: kWorkerUnavailable (cannot spawn), kWorkerTimeout (worker is
/// killed), kWorkerExit (died mid-request), kWorkerProtocol (bad handshake or
/// status line), kWorkerTaskFailed (status "error"), kWorkerContract (missing
/// or malformed output). Messages carry the tail of the worker's stderr.
class WorkerClient : public RestorationBackend {
 public:
  explicit WorkerClient(WorkerEndpoint endpoint);
  ~WorkerClient() override;

  WorkerClient(const WorkerClient&) = delete;
  WorkerClient& operator=(const WorkerClient&) = delete;

  /// Sends one job and waits for its status line. Throws on any failure,
  /// including a status of "error".
  WorkerStatus call(const WorkerRequest& request);

  ImageBuffer restore(WorkerTask task, const WorkerParams& params,
                      const ImageBuffer& input) override;

  /// Runs a detection task on an image file and returns its score.
  double detect(WorkerTask task, const std::filesystem::path& image);

  /// Starts the worker if needed and returns its declared capacity.
  int capacity() const override;

  /// Last bytes the worker wrote to stderr.
  std::string stderr_tail() const;

 private:
  struct Process;

  std::shared_ptr<Process> ensure_started(std::unique_lock<std::mutex>& lock) const;
  void retire_locked(const std::shared_ptr<Process>& p) const;
  void join_retired(std::unique_lock<std::mutex>& lock) const;
  void reader_loop(std::shared_ptr<Process> p) const;
  void stderr_loop(std::shared_ptr<Process> p) const;
  std::string with_stderr(const std::string& msg) const;

  WorkerEndpoint endpoint_;
  std::filesystem::path scratch_;
  bool own_scratch_ = false;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  mutable std::shared_ptr<Process> proc_;
  mutable std::vector<std::shared_ptr<Process>> retired_;
  mutable std::uint64_t next_id_ = 1;
  mutable std::string stderr_tail_;
};

}  // namespace afkit
