// Copyright 2026 The neolex Authors
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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "neolex/analyze.hpp"

namespace neolex {

SubprocessAdapter::SubprocessAdapter(std::string command, std::chrono::milliseconds timeout, AdapterCapabilities caps)
    : command_(std::move(command)), timeout_(timeout), caps_(caps) {
  if (command_.empty()) throw PreconditionError("analyzer command is empty");
}

SubprocessAdapter::~SubprocessAdapter() { stop(); }

void SubprocessAdapter::start() {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0) throw AnalyzerError(std::string("pipe: ") + std::strerror(errno));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw AnalyzerError(std::string("pipe: ") + std::strerror(errno));
  }
  const pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    throw AnalyzerError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  fcntl(in_pipe[1], F_SETFD, FD_CLOEXEC);
  fcntl(out_pipe[0], F_SETFD, FD_CLOEXEC);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
}

void SubprocessAdapter::stop() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(pid_, SIGTERM);
    waitpid(pid_, nullptr, 0);
  }
  pid_ = -1;
  buffer_.clear();
}

Analysis SubprocessAdapter::analyze(std::string_view surface, std::optional<std::string_view> sentence) {
  std::lock_guard lock(mu_);
  if (pid_ < 0) start();

  auto fail = [&](const std::string& message) {
    stop();
    throw AnalyzerError(command_ + ": " + message);
  };

  const std::string request = analysis_request_json(surface, sentence) + "\n";
  // A child that exited would raise SIGPIPE on write.
  struct sigaction ignore {}, previous {};
  ignore.sa_handler = SIG_IGN;
  sigaction(SIGPIPE, &ignore, &previous);
  std::size_t written = 0;
  while (written < request.size()) {
    const auto n = write(to_child_, request.data() + written, request.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      sigaction(SIGPIPE, &previous, nullptr);
      fail("write failed");
    }
    written += static_cast<std::size_t>(n);
  }
  sigaction(SIGPIPE, &previous, nullptr);

  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (buffer_.find('\n') == std::string::npos) {
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count();
    if (left <= 0) fail("timed out");
    pollfd p{from_child_, POLLIN, 0};
    const int ready = poll(&p, 1, static_cast<int>(left));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) fail("timed out");
    char chunk[4096];
    const auto n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) fail("process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
  const auto nl = buffer_.find('\n');
  const std::string line = buffer_.substr(0, nl);
  buffer_.erase(0, nl + 1);
  return parse_analysis_json(line);
}

}  // namespace neolex
