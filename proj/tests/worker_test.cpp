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

#include <atomic>
#include <chrono>
#include <fstream>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "afkit/error.hpp"
#include "afkit/png_io.hpp"
#include "afkit/worker.hpp"
#include "support.hpp"

namespace afkit {
namespace {

using namespace std::chrono_literals;

WorkerEndpoint stub(const std::string& mode, const std::string& extra = "",
                    std::chrono::milliseconds timeout = 20s) {
  WorkerEndpoint e;
  e.command = test::stub_command(mode, extra);
  e.timeout = timeout;
  return e;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no afkit::Error thrown";
  return ErrorCode::kInvalidArgument;
}

ImageBuffer sample_image(int w = 12, int h = 9) {
  std::mt19937_64 rng(w * 100 + h);
  return test::random_u8(rng, w, h, 3);
}

TEST(Tasks, NamesRoundTrip) {
  for (auto t : {WorkerTask::kFbcnn, WorkerTask::kRestormerDenoise, WorkerTask::kSwinfirX2,
                 WorkerTask::kDetectTrufor, WorkerTask::kDetectEarlyFusion}) {
    EXPECT_EQ(parse_task(task_name(t)), t);
  }
  EXPECT_EQ(task_name(WorkerTask::kSwinfirX2), "swinfir-x2");
  EXPECT_TRUE(is_detection_task(WorkerTask::kDetectTrufor));
  EXPECT_FALSE(is_detection_task(WorkerTask::kFbcnn));
  EXPECT_EQ(code_of([] { parse_task("gan"); }), ErrorCode::kInvalidArgument);
}

TEST(Tasks, ParameterValidation) {
  EXPECT_NO_THROW(validate_task_params(WorkerTask::kRestormerDenoise, {{"sigma", 15}}));
  EXPECT_NO_THROW(validate_task_params(WorkerTask::kRestormerDenoise, {{"sigma", 0}}));
  EXPECT_THROW(validate_task_params(WorkerTask::kRestormerDenoise, {}), Error);
  EXPECT_THROW(validate_task_params(WorkerTask::kRestormerDenoise, {{"sigma", -1}}), Error);
  EXPECT_THROW(validate_task_params(WorkerTask::kFbcnn, {{"sigma", 1}}), Error);
  EXPECT_NO_THROW(validate_task_params(WorkerTask::kFbcnn, {}));
}

TEST(SplitCommand, QuotesGroupWords) {
  EXPECT_EQ(split_command("python3  worker.py --gpu 0"),
            (std::vector<std::string>{"python3", "worker.py", "--gpu", "0"}));
  EXPECT_EQ(split_command("a 'b c' \"d e\" f"), (std::vector<std::string>{"a", "b c", "d e", "f"}));
  EXPECT_TRUE(split_command("   ").empty());
}

TEST(WorkerClient, IdentityRestoreAndHandshake) {
  WorkerClient c(stub("auto"));
  EXPECT_EQ(c.capacity(), 1);
  const auto img = sample_image();
  EXPECT_EQ(c.restore(WorkerTask::kFbcnn, {}, img), img);
  EXPECT_EQ(c.restore(WorkerTask::kRestormerDenoise, {{"sigma", 15}}, img), img);
  const auto up = c.restore(WorkerTask::kSwinfirX2, {}, img);
  EXPECT_EQ(up.width(), 24);
  EXPECT_EQ(up.height(), 18);
  EXPECT_EQ(up.at(3, 5, 1), img.at(1, 2, 1));
}

TEST(WorkerClient, RestoreRejectsBadParams) {
  WorkerClient c(stub("auto"));
  EXPECT_EQ(code_of([&] { c.restore(WorkerTask::kRestormerDenoise, {}, sample_image()); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { c.restore(WorkerTask::kDetectTrufor, {}, sample_image()); }),
            ErrorCode::kInvalidArgument);
}

TEST(WorkerClient, DetectReturnsScore) {
  test::TempDir dir;
  const auto img = test::constant_u8(8, 8, 3, 51);
  save_png(img, dir / "a.png");
  WorkerClient c(stub("auto"));
  EXPECT_NEAR(c.detect(WorkerTask::kDetectTrufor, dir / "a.png"), 0.2, 1e-12);
  EXPECT_NEAR(c.detect(WorkerTask::kDetectEarlyFusion, dir / "a.png"), 0.2, 1e-12);
  EXPECT_EQ(code_of([&] { c.detect(WorkerTask::kFbcnn, dir / "a.png"); }), ErrorCode::kInvalidArgument);
}

TEST(WorkerClient, CallReturnsStatus) {
  test::TempDir dir;
  save_png(sample_image(), dir / "in.png");
  WorkerClient c(stub("auto"));
  const auto s1 = c.call({WorkerTask::kFbcnn, {}, dir / "in.png", dir / "out.png"});
  const auto s2 = c.call({WorkerTask::kFbcnn, {}, dir / "in.png", dir / "out2.png"});
  EXPECT_TRUE(s1.ok);
  EXPECT_NE(s1.id, s2.id);
  EXPECT_EQ(load_png(dir / "out.png"), sample_image());
}

TEST(WorkerClient, CallerScratchDirectoryIsKept) {
  test::TempDir dir;
  auto ep = stub("auto");
  ep.scratch_dir = dir.path();
  {
    WorkerClient c(ep);
    c.restore(WorkerTask::kFbcnn, {}, sample_image());
  }
  EXPECT_TRUE(std::filesystem::exists(dir.path()));
}

TEST(WorkerClient, ErrorCodes) {
  const auto img = sample_image();
  auto restore_with = [&](const std::string& mode, std::chrono::milliseconds t = 20s) {
    return code_of([&] {
      WorkerClient c(stub(mode, "", t));
      c.restore(WorkerTask::kFbcnn, {}, img);
    });
  };
  EXPECT_EQ(restore_with("bad-dims"), ErrorCode::kWorkerContract);
  EXPECT_EQ(restore_with("no-output"), ErrorCode::kWorkerContract);
  EXPECT_EQ(restore_with("error"), ErrorCode::kWorkerTaskFailed);
  EXPECT_EQ(restore_with("crash"), ErrorCode::kWorkerExit);
  EXPECT_EQ(restore_with("hang", 500ms), ErrorCode::kWorkerTimeout);
  EXPECT_EQ(restore_with("garbage"), ErrorCode::kWorkerProtocol);
  EXPECT_EQ(restore_with("wrong-id"), ErrorCode::kWorkerProtocol);
  EXPECT_EQ(restore_with("bad-handshake"), ErrorCode::kWorkerProtocol);
  EXPECT_EQ(restore_with("old-protocol"), ErrorCode::kWorkerProtocol);
  EXPECT_EQ(restore_with("no-handshake", 500ms), ErrorCode::kWorkerTimeout);

  EXPECT_EQ(code_of([&] {
              WorkerClient c({"/nonexistent/afkit-worker", 5s, {}});
              c.restore(WorkerTask::kFbcnn, {}, img);
            }),
            ErrorCode::kWorkerUnavailable);
  EXPECT_EQ(code_of([&] {
              WorkerClient c({"", 5s, {}});
              (void)c.capacity();
            }),
            ErrorCode::kWorkerUnavailable);
  // Exits before the handshake.
  EXPECT_EQ(code_of([&] {
              WorkerClient c({"false", 5s, {}});
              (void)c.capacity();
            }),
            ErrorCode::kWorkerUnavailable);
}

TEST(WorkerClient, DetectContract) {
  test::TempDir dir;
  save_png(sample_image(), dir / "a.png");
  EXPECT_EQ(code_of([&] {
              WorkerClient c(stub("bad-score"));
              c.detect(WorkerTask::kDetectTrufor, dir / "a.png");
            }),
            ErrorCode::kWorkerContract);
  EXPECT_EQ(code_of([&] {
              WorkerClient c(stub("no-output"));
              c.detect(WorkerTask::kDetectTrufor, dir / "a.png");
            }),
            ErrorCode::kWorkerContract);
}

TEST(WorkerClient, TaskErrorCarriesMessage) {
  WorkerClient c(stub("error"));
  try {
    c.restore(WorkerTask::kFbcnn, {}, sample_image());
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.is_worker_error());
    EXPECT_NE(std::string(e.what()).find("simulated failure"), std::string::npos) << e.what();
  }
}

TEST(WorkerClient, CrashMessageCarriesStderr) {
  WorkerClient c(stub("crash"));
  try {
    c.restore(WorkerTask::kFbcnn, {}, sample_image());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWorkerExit);
  }
  // The stderr reader may lag the exit a little.
  for (int i = 0; i < 50 && c.stderr_tail().find("simulated crash") == std::string::npos; ++i)
    std::this_thread::sleep_for(20ms);
  EXPECT_NE(c.stderr_tail().find("simulated crash"), std::string::npos);
}

TEST(WorkerClient, RestartsAfterCrash) {
  test::TempDir dir;
  WorkerClient c(stub("crash-once", "--log '" + (dir / "log").string() + "'"));
  const auto img = sample_image();
  EXPECT_EQ(code_of([&] { c.restore(WorkerTask::kFbcnn, {}, img); }), ErrorCode::kWorkerExit);
  EXPECT_EQ(c.restore(WorkerTask::kFbcnn, {}, img), img);
  EXPECT_EQ(c.restore(WorkerTask::kFbcnn, {}, img), img);
}

// A timed-out worker is killed and the next call starts a fresh one.
TEST(WorkerClient, TimeoutKillsAndRespawns) {
  WorkerClient hang(stub("hang", "", 300ms));
  EXPECT_EQ(code_of([&] { hang.restore(WorkerTask::kFbcnn, {}, sample_image()); }),
            ErrorCode::kWorkerTimeout);
  EXPECT_EQ(code_of([&] { hang.restore(WorkerTask::kFbcnn, {}, sample_image()); }),
            ErrorCode::kWorkerTimeout);
}

TEST(WorkerClient, ConcurrentRequestsUpToCapacity) {
  WorkerClient c(stub("auto", "--capacity 4 --delay-ms 300"));
  ASSERT_EQ(c.capacity(), 4);
  const auto img = sample_image();
  std::atomic<int> ok{0};
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i)
    threads.emplace_back([&] { ok += c.restore(WorkerTask::kFbcnn, {}, img) == img; });
  for (auto& t : threads) t.join();
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  EXPECT_EQ(ok, 4);
  // Serial execution would take at least 1.2 s.
  EXPECT_LT(elapsed, 1000ms);
}

TEST(WorkerClient, SerialWorkerStillServesManyThreads) {
  WorkerClient c(stub("auto"));
  const auto img = sample_image();
  std::atomic<int> ok{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i)
    threads.emplace_back([&] { ok += c.restore(WorkerTask::kFbcnn, {}, img) == img; });
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok, 6);
}

}  // namespace
}  // namespace afkit
