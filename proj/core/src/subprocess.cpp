#include "kbqa/subprocess.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "kbqa/error.hpp"

namespace kbqa {

LineProcess::LineProcess(std::string command) : command_(std::move(command)) {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw ScorerError("pipe: " + std::string(std::strerror(errno)));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw ScorerError("pipe: " + std::string(std::strerror(errno)));
  }
  pid_ = fork();
  if (pid_ < 0) throw ScorerError("fork: " + std::string(std::strerror(errno)));
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  signal(SIGPIPE, SIG_IGN);
}

LineProcess::~LineProcess() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    if (waitpid(pid_, &status, WNOHANG) == 0) {
      kill(pid_, SIGTERM);
      waitpid(pid_, &status, 0);
    }
  }
}

void LineProcess::write_line(std::string_view line) {
  std::string data(line);
  data += '\n';
  std::size_t written = 0;
  while (written < data.size()) {
    auto n = write(to_child_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ScorerError("scorer process '" + command_ + "' closed its input");
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string LineProcess::read_line(std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) throw ScorerError("scorer process '" + command_ + "' timed out");
    pollfd fd{from_child_, POLLIN, 0};
    int ready = poll(&fd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw ScorerError("poll: " + std::string(std::strerror(errno)));
    }
    if (ready == 0) continue;
    char chunk[4096];
    auto n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw ScorerError("scorer process '" + command_ + "' closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace kbqa
