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

#include "afkit/worker.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "afkit/error.hpp"
#include "afkit/png_io.hpp"
#include "json.hpp"

extern char** environ;

namespace afkit {

namespace {

using json = nlohmann::json;

constexpr std::size_t kStderrKeep = 4096;
constexpr int kProtocolVersion = 1;

struct TaskInfo {
  WorkerTask task;
  std::string_view name;
};

constexpr TaskInfo kTasks[] = {
    {WorkerTask::kFbcnn, "fbcnn"},
    {WorkerTask::kRestormerDenoise, "restormer-denoise"},
    {WorkerTask::kSwinfirX2, "swinfir-x2"},
    {WorkerTask::kDetectTrufor, "detect-trufor"},
    {WorkerTask::kDetectEarlyFusion, "detect-earlyfusion"},
};

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

bool write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

std::string describe_exit(int status) {
  if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
  return "stopped";
}

}  // namespace

std::string_view task_name(WorkerTask task) {
  for (const auto& t : kTasks) {
    if (t.task == task) return t.name;
  }
  return "unknown";
}

WorkerTask parse_task(std::string_view name) {
  for (const auto& t : kTasks) {
    if (t.name == name) return t.task;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown worker task '" + std::string(name) + "'");
}

bool is_detection_task(WorkerTask task) {
  return task == WorkerTask::kDetectTrufor || task == WorkerTask::kDetectEarlyFusion;
}

void validate_task_params(WorkerTask task, const WorkerParams& params) {
  if (task == WorkerTask::kRestormerDenoise) {
    const auto it = params.find("sigma");
    if (it == params.end() || !(it->second >= 0.0) || !std::isfinite(it->second)) {
      throw Error(ErrorCode::kInvalidArgument, "restormer-denoise needs a 'sigma' >= 0");
    }
    if (params.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument, "restormer-denoise takes only 'sigma'");
    }
    return;
  }
  if (!params.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(task_name(task)) + " takes no parameters");
  }
}

std::vector<std::string> split_command(std::string_view command) {
  std::vector<std::string> out;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char ch : command) {
    if (quote != 0) {
      if (ch == quote) {
        quote = 0;
      } else {
        cur += ch;
      }
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      in_word = true;
    } else if (ch == ' ' || ch == '\t' || ch == '\n') {
      if (in_word) out.push_back(std::move(cur));
      cur.clear();
      in_word = false;
    } else {
      cur += ch;
      in_word = true;
    }
  }
  if (quote != 0) {
    throw Error(ErrorCode::kInvalidArgument, "unterminated quote in worker command");
  }
  if (in_word) out.push_back(std::move(cur));
  return out;
}

struct WorkerClient::Process {
  pid_t pid = -1;
  int in_fd = -1;
  int out_fd = -1;
  int err_fd = -1;
  std::thread out_thread;
  std::thread err_thread;

  // Guarded by the client mutex.
  bool handshake = false;
  int capacity = 1;
  int in_flight = 0;
  bool dead = false;
  ErrorCode fatal_code = ErrorCode::kWorkerExit;
  std::string fatal;
  std::set<std::uint64_t> pending;
  std::map<std::uint64_t, WorkerStatus> results;

  std::mutex reap_mu;
  bool reaped = false;
  int exit_status = 0;

  /// Reaps the child; with `block` false only if it already exited.
  bool reap(bool block) {
    std::lock_guard lock(reap_mu);
    if (reaped) return true;
    int status = 0;
    pid_t r;
    do {
      r = ::waitpid(pid, &status, block ? 0 : WNOHANG);
    } while (r < 0 && errno == EINTR);
    if (r == pid) {
      reaped = true;
      exit_status = status;
    }
    return reaped;
  }

  void kill_child() {
    std::lock_guard lock(reap_mu);
    if (!reaped) ::kill(pid, SIGKILL);
  }

  void close_input() {
    if (in_fd >= 0) {
      ::close(in_fd);
      in_fd = -1;
    }
  }
};

WorkerClient::WorkerClient(WorkerEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.scratch_dir.empty()) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "afkit-worker-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) {
      throw Error(ErrorCode::kUnwritablePath, "cannot create worker scratch directory");
    }
    scratch_ = tmpl;
    own_scratch_ = true;
  } else {
    scratch_ = endpoint_.scratch_dir;
    std::error_code ec;
    std::filesystem::create_directories(scratch_, ec);
    if (ec) {
      throw Error(ErrorCode::kUnwritablePath,
                  "cannot create worker scratch directory " + scratch_.string());
    }
  }
}

WorkerClient::~WorkerClient() {
  std::unique_lock lock(mu_);
  if (proc_) {
    auto p = proc_;
    p->close_input();  // a well-behaved worker exits on EOF
    retire_locked(p);
    lock.unlock();
    for (int i = 0; i < 200 && !p->reap(false); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    lock.lock();
  }
  join_retired(lock);
  lock.unlock();
  if (own_scratch_) {
    std::error_code ec;
    std::filesystem::remove_all(scratch_, ec);
  }
}

std::string WorkerClient::with_stderr(const std::string& msg) const {
  if (stderr_tail_.empty()) return msg;
  return msg + "; worker stderr: " + stderr_tail_;
}

void WorkerClient::retire_locked(const std::shared_ptr<Process>& p) const {
  p->dead = true;
  if (proc_ == p) proc_.reset();
  retired_.push_back(p);
  cv_.notify_all();
}

void WorkerClient::join_retired(std::unique_lock<std::mutex>& lock) const {
  auto list = std::move(retired_);
  retired_.clear();
  lock.unlock();
  for (auto& p : list) {
    p->close_input();
    p->kill_child();
    p->reap(true);
    if (p->out_thread.joinable()) p->out_thread.join();
    if (p->err_thread.joinable()) p->err_thread.join();
    if (p->out_fd >= 0) ::close(p->out_fd);
    if (p->err_fd >= 0) ::close(p->err_fd);
    p->out_fd = p->err_fd = -1;
  }
  lock.lock();
}

void WorkerClient::reader_loop(std::shared_ptr<Process> p) const {
  std::string buf;
  char chunk[4096];
  for (;;) {
    const ssize_t n = ::read(p->out_fd, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buf.append(chunk, static_cast<std::size_t>(n));
    std::size_t nl;
    while ((nl = buf.find('\n')) != std::string::npos) {
      std::string line = buf.substr(0, nl);
      buf.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;

      std::lock_guard lock(mu_);
      if (p->dead) continue;
      auto protocol_error = [&](const std::string& what) {
        p->fatal_code = ErrorCode::kWorkerProtocol;
        p->fatal = what + ": '" + line.substr(0, 200) + "'";
        p->kill_child();
        retire_locked(p);
      };
      const json j = json::parse(line, nullptr, false);
      if (!p->handshake) {
        if (j.is_discarded() || !j.is_object() || !j.contains("protocol") ||
            !j["protocol"].is_number_integer()) {
          protocol_error("malformed handshake");
          continue;
        }
        if (j["protocol"].get<int>() != kProtocolVersion) {
          protocol_error("unsupported protocol version");
          continue;
        }
        int cap = 1;
        if (j.contains("capacity")) {
          if (!j["capacity"].is_number_integer() || j["capacity"].get<int>() < 1) {
            protocol_error("bad capacity in handshake");
            continue;
          }
          cap = j["capacity"].get<int>();
        }
        p->capacity = cap;
        p->handshake = true;
        cv_.notify_all();
        continue;
      }
      if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
          !j["id"].is_number_unsigned() || !j.contains("status") || !j["status"].is_string()) {
        protocol_error("malformed status line");
        continue;
      }
      WorkerStatus st;
      st.id = j["id"].get<std::uint64_t>();
      const std::string s = j["status"].get<std::string>();
      if (s != "ok" && s != "error") {
        protocol_error("unknown status value");
        continue;
      }
      st.ok = s == "ok";
      if (j.contains("message") && j["message"].is_string()) st.message = j["message"];
      if (!p->pending.count(st.id)) {
        protocol_error("status for unknown job id");
        continue;
      }
      p->results[st.id] = std::move(st);
      cv_.notify_all();
    }
  }
  // Output closed: the worker is gone or going. Give it a moment to exit so
  // the message can say how.
  for (int i = 0; i < 50 && !p->reap(false); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  std::lock_guard lock(mu_);
  if (!p->dead) {
    p->fatal_code = ErrorCode::kWorkerExit;
    p->fatal = p->reaped ? "worker " + describe_exit(p->exit_status) : "worker closed its output";
    retire_locked(p);
  }
}

void WorkerClient::stderr_loop(std::shared_ptr<Process> p) const {
  char chunk[4096];
  for (;;) {
    const ssize_t n = ::read(p->err_fd, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    std::lock_guard lock(mu_);
    stderr_tail_.append(chunk, static_cast<std::size_t>(n));
    if (stderr_tail_.size() > kStderrKeep) {
      stderr_tail_.erase(0, stderr_tail_.size() - kStderrKeep);
    }
  }
}

std::shared_ptr<WorkerClient::Process> WorkerClient::ensure_started(
    std::unique_lock<std::mutex>& lock) const {
  if (!retired_.empty()) join_retired(lock);
  if (proc_) {
    auto p = proc_;
    const auto deadline = std::chrono::steady_clock::now() + endpoint_.timeout;
    if (!cv_.wait_until(lock, deadline, [&] { return p->handshake || p->dead; })) {
      throw Error(ErrorCode::kWorkerTimeout, with_stderr("worker sent no handshake in time"));
    }
    if (p->dead) throw Error(p->fatal_code, with_stderr(p->fatal));
    return p;
  }

  const auto argv_s = split_command(endpoint_.command);
  if (argv_s.empty()) throw Error(ErrorCode::kWorkerUnavailable, "no worker command configured");
  ignore_sigpipe();

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0 ||
      ::pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kWorkerUnavailable, "cannot create worker pipes");
  }
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, in_pipe[0], 0);
  posix_spawn_file_actions_adddup2(&fa, out_pipe[1], 1);
  posix_spawn_file_actions_adddup2(&fa, err_pipe[1], 2);
  std::vector<char*> argv;
  for (const auto& a : argv_s) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, argv[0], &fa, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    throw Error(ErrorCode::kWorkerUnavailable,
                "cannot start worker '" + argv_s[0] + "': " + std::strerror(rc));
  }

  auto p = std::make_shared<Process>();
  p->pid = pid;
  p->in_fd = in_pipe[1];
  p->out_fd = out_pipe[0];
  p->err_fd = err_pipe[0];
  stderr_tail_.clear();
  proc_ = p;
  p->out_thread = std::thread([this, p] { reader_loop(p); });
  p->err_thread = std::thread([this, p] { stderr_loop(p); });

  const auto deadline = std::chrono::steady_clock::now() + endpoint_.timeout;
  if (!cv_.wait_until(lock, deadline, [&] { return p->handshake || p->dead; })) {
    p->kill_child();
    retire_locked(p);
    throw Error(ErrorCode::kWorkerTimeout, with_stderr("worker sent no handshake in time"));
  }
  if (p->dead) {
    const ErrorCode code = p->fatal_code == ErrorCode::kWorkerProtocol
                               ? ErrorCode::kWorkerProtocol
                               : ErrorCode::kWorkerUnavailable;
    throw Error(code, with_stderr("worker failed to start: " + p->fatal));
  }
  return p;
}

int WorkerClient::capacity() const {
  std::unique_lock lock(mu_);
  return ensure_started(lock)->capacity;
}

std::string WorkerClient::stderr_tail() const {
  std::lock_guard lock(mu_);
  return stderr_tail_;
}

WorkerStatus WorkerClient::call(const WorkerRequest& request) {
  validate_task_params(request.task, request.params);
  std::unique_lock lock(mu_);
  auto p = ensure_started(lock);
  const auto deadline = std::chrono::steady_clock::now() + endpoint_.timeout;
  if (!cv_.wait_until(lock, deadline, [&] { return p->dead || p->in_flight < p->capacity; })) {
    throw Error(ErrorCode::kWorkerTimeout, "timed out waiting for a free worker slot");
  }
  if (p->dead) throw Error(p->fatal_code, with_stderr(p->fatal));

  const std::uint64_t id = next_id_++;
  json params = json::object();
  for (const auto& [k, v] : request.params) params[k] = v;
  const json job = {{"id", id},
                    {"task", std::string(task_name(request.task))},
                    {"params", params},
                    {"input", request.input.string()},
                    {"output", request.output.string()}};
  p->pending.insert(id);
  ++p->in_flight;
  struct Slot {
    Process& p;
    std::uint64_t id;
    std::condition_variable& cv;
    ~Slot() {
      p.pending.erase(id);
      p.results.erase(id);
      --p.in_flight;
      cv.notify_all();
    }
  } slot{*p, id, cv_};

  if (!write_all(p->in_fd, job.dump() + "\n")) {
    p->fatal_code = ErrorCode::kWorkerExit;
    p->fatal = "worker stopped reading its input";
    retire_locked(p);
    throw Error(ErrorCode::kWorkerExit, with_stderr(p->fatal));
  }
  if (!cv_.wait_until(lock, deadline, [&] { return p->dead || p->results.count(id) > 0; })) {
    p->fatal_code = ErrorCode::kWorkerTimeout;
    p->fatal = "worker timed out on job " + std::to_string(id) + " (" +
               std::string(task_name(request.task)) + ")";
    p->kill_child();
    retire_locked(p);
    throw Error(ErrorCode::kWorkerTimeout, with_stderr(p->fatal));
  }
  if (!p->results.count(id)) throw Error(p->fatal_code, with_stderr(p->fatal));
  WorkerStatus st = p->results[id];
  if (!st.ok) {
    throw Error(ErrorCode::kWorkerTaskFailed,
                with_stderr(std::string(task_name(request.task)) + " failed: " + st.message));
  }
  return st;
}

ImageBuffer WorkerClient::restore(WorkerTask task, const WorkerParams& params,
                                  const ImageBuffer& input) {
  if (is_detection_task(task)) {
    throw Error(ErrorCode::kInvalidArgument, "restore() called with a detection task");
  }
  static std::atomic<std::uint64_t> counter{0};
  const std::string stem = "job-" + std::to_string(counter++);
  WorkerRequest req{task, params, scratch_ / (stem + "-in.png"), scratch_ / (stem + "-out.png")};
  save_png(input.is_u8() ? input : quantize_u8(input), req.input);
  struct Cleanup {
    const WorkerRequest& r;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove(r.input, ec);
      std::filesystem::remove(r.output, ec);
    }
  } cleanup{req};

  call(req);
  ImageBuffer out;
  try {
    out = load_png(req.output);
  } catch (const Error& e) {
    throw Error(ErrorCode::kWorkerContract,
                std::string(task_name(task)) + " produced no readable PNG: " + e.what());
  }
  const int f = task == WorkerTask::kSwinfirX2 ? 2 : 1;
  if (out.width() != input.width() * f || out.height() != input.height() * f ||
      out.channels() != input.channels()) {
    throw Error(ErrorCode::kWorkerContract,
                std::string(task_name(task)) + " returned " + std::to_string(out.width()) + "x" +
                    std::to_string(out.height()) + "x" + std::to_string(out.channels()) +
                    ", expected " + std::to_string(input.width() * f) + "x" +
                    std::to_string(input.height() * f) + "x" + std::to_string(input.channels()));
  }
  return out;
}

double WorkerClient::detect(WorkerTask task, const std::filesystem::path& image) {
  if (!is_detection_task(task)) {
    throw Error(ErrorCode::kInvalidArgument, "detect() called with a restoration task");
  }
  static std::atomic<std::uint64_t> counter{0};
  const auto out_path = scratch_ / ("detect-" + std::to_string(counter++) + ".json");
  struct Cleanup {
    std::filesystem::path p;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  } cleanup{out_path};
  const WorkerStatus st = call({task, {}, image, out_path});

  std::ifstream in(out_path);
  if (!in) {
    throw Error(ErrorCode::kWorkerContract,
                std::string(task_name(task)) + " wrote no score record");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const json j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("score") || !j["score"].is_number() ||
      !j.contains("id") || !j["id"].is_number_unsigned() ||
      j["id"].get<std::uint64_t>() != st.id) {
    throw Error(ErrorCode::kWorkerContract,
                std::string(task_name(task)) + " score record does not match {id, score}");
  }
  const double score = j["score"].get<double>();
  if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
    throw Error(ErrorCode::kWorkerContract,
                std::string(task_name(task)) + " score outside [0,1]: " + std::to_string(score));
  }
  return score;
}

}  // namespace afkit
